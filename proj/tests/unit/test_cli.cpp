// Copyright 2026 The qpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpool/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "qpool/errors.hpp"
#include "qpool/serialization.hpp"
#include "test_support.hpp"

namespace qpool {
namespace {

namespace fs = std::filesystem;
using testing::MatrixNear;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result qpool_run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("qpool_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv("QPOOL_SEED");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    ::unsetenv("QPOOL_SEED");
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write_matrix(const std::string& name, const ComplexMatrix& m, bool wrapped = true) {
    const Json doc = wrapped ? Json{{"format_version", 1}, {"matrix", matrix_to_json(m)}}
                             : matrix_to_json(m);
    write_text_file_atomic(path(name), doc.dump());
    return path(name);
  }
  ReportFile report(const std::string& name) const {
    return parse_report_file(read_text_file(path(name)));
  }

  fs::path dir_;
};

TEST(Formatting, SixSignificantDigits) {
  EXPECT_EQ(cli::format_real(1.0 / 3.0), "0.333333");
  EXPECT_EQ(cli::format_real(-0.0), "0");
  EXPECT_EQ(cli::format_real(1234567.0), "1.23457e+06");
  EXPECT_EQ(cli::format_complex({0.5, -0.25}), "0.5-0.25i");
  EXPECT_EQ(cli::format_complex({0.0, 2.0}), "2i");
  EXPECT_EQ(cli::format_complex({0.25, 1e-17}), "0.25");
  EXPECT_EQ(cli::format_matrix(testing::diag({1, 0.5}), ""), "[  1    0]\n[  0  0.5]\n");
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(qpool_run({}).code, cli::kExitUsage);
  EXPECT_EQ(qpool_run({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(qpool_run({"demo", "nosuchdemo"}).code, cli::kExitUsage);
  EXPECT_EQ(qpool_run({"demo", "classical-redundant", "--out", path("x.json")}).code,
            cli::kExitUsage);
  EXPECT_EQ(qpool_run({"--help"}).code, cli::kExitOk);
  EXPECT_EQ(qpool_run({"verify", "--class", "iii"}).code, cli::kExitUsage);
}

TEST_F(CliTest, DemoExample224) {
  const auto r = qpool_run({"demo", "example224", "--out", path("r.json")});
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_NE(r.out.find("verdict: PASS"), std::string::npos);
  EXPECT_NE(r.out.find("trace distance(pooled, omega) = 0"), std::string::npos);
  const auto rep = std::get<PoolingReport>(report("r.json").report);
  EXPECT_LT(rep.max_trace_distance, 1e-9);
}

TEST_F(CliTest, DemoGhz) {
  const auto r = qpool_run({"demo", "ghz"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("distance 0.5)"), std::string::npos);
  EXPECT_NE(r.out.find("verdict: PASS"), std::string::npos);
}

TEST_F(CliTest, DemoClassical) {
  const auto red = qpool_run({"demo", "classical-redundant"});
  EXPECT_EQ(red.code, cli::kExitOk);
  EXPECT_NE(red.out.find("pooled      = (0.941176, 0.0588235)"), std::string::npos) << red.out;
  EXPECT_NE(red.out.find("p(s|a=0,b=0) = (0.8, 0.2)"), std::string::npos);
  EXPECT_NE(red.out.find("= 0.141176"), std::string::npos);
  const auto ind = qpool_run({"demo", "classical-independent"});
  EXPECT_EQ(ind.code, cli::kExitOk);
  EXPECT_NE(ind.out.find("verdict: PASS"), std::string::npos);
}

TEST_F(CliTest, RunSerializedDemoMatchesDemo) {
  ASSERT_EQ(qpool_run({"demo", "example224", "--save-scenario", path("s.json"), "--out",
                       path("demo.json")})
                .code,
            0);
  const auto r = qpool_run({"run", path("s.json"), "--tol", "1e-6", "--out", path("run.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto from_run = report("run.json"), from_demo = report("demo.json");
  EXPECT_TRUE(std::get<PoolingReport>(from_run.report) ==
              std::get<PoolingReport>(from_demo.report));
  EXPECT_EQ(from_run.config["outcome_tol"], 1e-6);
  EXPECT_EQ(from_run.config["command"], "run");
}

TEST_F(CliTest, RunTolIsEchoed) {
  qpool_run({"demo", "ghz", "--save-scenario", path("s.json")});
  ASSERT_EQ(qpool_run({"run", path("s.json"), "--tol", "0.3", "--out", path("r.json")}).code, 0);
  const auto rep = report("r.json");
  EXPECT_EQ(rep.config["outcome_tol"], 0.3);
  const auto& pr = std::get<PoolingReport>(rep.report);
  EXPECT_EQ(pr.outcome_tol, 0.3);
  EXPECT_EQ(pr.skipped, 4u);
}

TEST_F(CliTest, RunNeverFailsOnNegativeVerdict) {
  qpool_run({"demo", "ghz", "--save-scenario", path("s.json")});
  const auto r = qpool_run({"run", path("s.json")});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_NE(r.out.find("max trace distance 0.5"), std::string::npos);
}

TEST_F(CliTest, RunInputErrors) {
  auto j = scenario_file_to_json(scenario_file_from(example224_scenario()));
  j["state"]["rho"][0][1] = Json::array({1});
  write_text_file_atomic(path("bad.json"), j.dump());
  const auto bad = qpool_run({"run", path("bad.json")});
  EXPECT_EQ(bad.code, cli::kExitInput);
  EXPECT_NE(bad.err.find("$.state.rho[0][1]"), std::string::npos) << bad.err;

  write_text_file_atomic(path("syntax.json"), "{\"format_version\": 1,\n\"dims\": [}");
  const auto syn = qpool_run({"run", path("syntax.json")});
  EXPECT_EQ(syn.code, cli::kExitInput);
  EXPECT_NE(syn.err.find("line 2"), std::string::npos) << syn.err;

  EXPECT_EQ(qpool_run({"run", path("missing.json")}).code, cli::kExitInput);
  EXPECT_EQ(qpool_run({"run", path("bad.json"), "--tol", "-1"}).code, cli::kExitUsage);
}

TEST_F(CliTest, VerifyArguments) {
  EXPECT_EQ(qpool_run({"verify", "--class", "i", "--trials", "0"}).code, cli::kExitUsage);
  EXPECT_EQ(qpool_run({"verify", "--class", "i", "--trials", "2", "--dims", "2,2,4"}).code,
            cli::kExitUsage);
  EXPECT_EQ(qpool_run({"verify", "--class", "none", "--trials", "2", "--dims", "2,2"}).code,
            cli::kExitUsage);
  EXPECT_EQ(qpool_run({"verify", "--class", "ii", "--trials", "2", "--dims", "2,x"}).code,
            cli::kExitUsage);
  EXPECT_EQ(qpool_run({"verify", "--class", "i", "--trials", "2", "--seed", "abc"}).code,
            cli::kExitUsage);
  EXPECT_EQ(qpool_run({"verify", "--class", "i", "--trials", "2", "--jobs", "0"}).code,
            cli::kExitUsage);
}

TEST_F(CliTest, VerifyClassesPass) {
  const auto i = qpool_run({"verify", "--class", "i", "--trials", "8", "--seed", "7"});
  EXPECT_EQ(i.code, cli::kExitOk) << i.out;
  EXPECT_NE(i.out.find(": holds"), std::string::npos);
  EXPECT_EQ(qpool_run({"verify", "--class", "ii", "--trials", "8", "--dims", "3,2"}).code, 0);
  const auto none =
      qpool_run({"verify", "--class", "none", "--trials", "20", "--dims", "2,2,2"});
  EXPECT_EQ(none.code, cli::kExitOk);
  EXPECT_NE(none.out.find("failing trials"), std::string::npos);
}

TEST_F(CliTest, VerifySeedFromEnvironment) {
  ::setenv("QPOOL_SEED", "99", 1);
  ASSERT_EQ(qpool_run({"verify", "--class", "ii", "--trials", "2", "--out", path("env.json")}).code,
            0);
  ASSERT_EQ(qpool_run({"verify", "--class", "ii", "--trials", "2", "--seed", "5", "--out",
                       path("flag.json")})
                .code,
            0);
  EXPECT_EQ(report("env.json").config["seed"], 99);
  EXPECT_EQ(report("flag.json").config["seed"], 5);
  ::setenv("QPOOL_SEED", "nope", 1);
  EXPECT_EQ(qpool_run({"verify", "--class", "ii", "--trials", "2"}).code, cli::kExitUsage);
}

TEST_F(CliTest, VerifyDeterministic) {
  for (const char* jobs : {"1", "3"}) {
    const std::vector<std::string> base{"verify", "--class", "i",    "--trials", "6",
                                        "--seed", "11",      "--jobs", jobs};
    auto a = base, b = base;
    a.insert(a.end(), {"--out", path("a.json")});
    b.insert(b.end(), {"--out", path("b.json")});
    ASSERT_EQ(qpool_run(a).code, 0);
    ASSERT_EQ(qpool_run(b).code, 0);
    EXPECT_TRUE(report("a.json").same_results(report("b.json")));
  }
}

TEST_F(CliTest, PoolExample224) {
  const auto w = state_224();
  const Povm pm = plus_minus_povm();
  const auto a = write_matrix("a.json", alice_update(w, pm, 0).state.matrix());
  const auto b = write_matrix("b.json", bob_update(w, pm, 0).state.matrix(), false);
  const auto rho = write_matrix("rho.json", system_state(w).matrix());
  const auto r = qpool_run({"pool", "--alpha", a, "--beta", b, "--rho", rho, "--out", path("p.json")});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto doc = parse_json(read_text_file(path("p.json")));
  EXPECT_TRUE(MatrixNear(matrix_from_json(doc["matrix"], "$"),
                         overseer_update(w, pm, 0, pm, 0).state.matrix(), 1e-12));
  EXPECT_TRUE(doc["diagnostics"]["is_density"].get<bool>());

  // The written state is itself a valid input.
  EXPECT_EQ(qpool_run({"pool", "--alpha", path("p.json"), "--beta", rho, "--rho", rho}).code, 0);
}

TEST_F(CliTest, PoolPriorTwiceAndChain) {
  Rng rng(3);
  const auto rho_m = random_full_rank_density(rng, 3).matrix();
  const auto rho = write_matrix("rho.json", rho_m);
  ASSERT_EQ(qpool_run({"pool", "--alpha", rho, "--beta", rho, "--rho", rho, "--out", path("p.json")})
                .code,
            0);
  EXPECT_TRUE(MatrixNear(
      matrix_from_json(parse_json(read_text_file(path("p.json")))["matrix"], "$"), rho_m, 1e-10));

  const Dims parties{2, 2, 2};
  const auto params = random_class_i_parameters(parties, 21);
  const auto w = class_i_state(params.rho, parties, params.u);
  std::vector<Povm> povms;
  for (std::size_t i = 0; i < 3; ++i) povms.push_back(random_povm(2, 2, 40 + i));
  std::vector<std::string> files;
  for (std::size_t i = 0; i < 3; ++i)
    files.push_back(write_matrix("post" + std::to_string(i) + ".json",
                                 update_on_outcomes(w, povms, {{i, 1}}).state.matrix()));
  const auto prior = write_matrix("prior.json", params.rho.matrix());
  ASSERT_EQ(qpool_run({"pool", "--alpha", files[0], "--beta", files[1], "--rho", prior, "--more",
                       files[2], "--out", path("chain.json")})
                .code,
            0);
  const auto joint = update_on_outcomes(w, povms, {{0, 1}, {1, 1}, {2, 1}});
  EXPECT_LT(trace_distance(matrix_from_json(parse_json(read_text_file(path("chain.json")))["matrix"], "$"),
                           joint.state.matrix()),
            1e-8);
}

TEST_F(CliTest, PoolErrors) {
  const auto p0 = write_matrix("p0.json", testing::diag({1, 0}));
  const auto p1 = write_matrix("p1.json", testing::diag({0, 1}));
  const auto mixed = write_matrix("mixed.json", identity(2) / 2.0);
  const auto big = write_matrix("big.json", identity(3) / 3.0);
  const auto bad = write_matrix("bad.json", testing::diag({0.7, 0.7}));

  const auto support = qpool_run({"pool", "--alpha", p1, "--beta", p0, "--rho", p0});
  EXPECT_EQ(support.code, cli::kExitInput);
  EXPECT_NE(support.err.find("supp(rho)"), std::string::npos) << support.err;
  EXPECT_EQ(qpool_run({"pool", "--alpha", p0, "--beta", p1, "--rho", mixed}).code, cli::kExitInput);
  EXPECT_EQ(qpool_run({"pool", "--alpha", p0, "--beta", big, "--rho", mixed}).code, cli::kExitInput);
  const auto trace = qpool_run({"pool", "--alpha", bad, "--beta", p1, "--rho", mixed});
  EXPECT_EQ(trace.code, cli::kExitInput);
  EXPECT_NE(trace.err.find("bad.json"), std::string::npos);
  EXPECT_EQ(qpool_run({"pool", "--alpha", p0, "--beta", p1}).code, cli::kExitUsage);
}

}  // namespace
}  // namespace qpool
