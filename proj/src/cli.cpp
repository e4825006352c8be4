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

#include <CLI11.hpp>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qpool/errors.hpp"
#include "qpool/pooling.hpp"
#include "qpool/scenario.hpp"
#include "qpool/serialization.hpp"

namespace qpool::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string format_tuple(const std::vector<std::size_t>& t) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << t[i];
  os << ")";
  return os.str();
}

std::string format_distribution(const ClassicalDistribution& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << format_real(p[i]);
  os << ")";
  return os.str();
}

void print_matrix(std::ostream& out, const std::string& name, const ComplexMatrix& m) {
  out << name << " =\n" << format_matrix(m, "  ");
}

void write_report(const std::string& path, const ReportFile& report, std::ostream& out) {
  write_text_file_atomic(path, emit_report_file(report));
  out << "report written to " << path << "\n";
}

void print_report_table(std::ostream& out, const PoolingReport& r) {
  out << "label: " << (r.label.empty() ? "(none)" : r.label) << "\n"
      << "dims: " << format_tuple(r.dims) << "  declared class: " << to_string(r.declared_class)
      << "  class (i) rank test: " << (r.passes_class_i_check ? "pass" : "fail") << "\n";
  out << std::left << std::setw(14) << "outcome" << std::setw(14) << "p" << std::setw(14)
      << "distance" << "notes\n";
  for (const auto& o : r.outcomes) {
    out << std::setw(14) << format_tuple(o.outcomes) << std::setw(14) << format_real(o.probability);
    if (o.skipped) {
      out << std::setw(14) << "-" << "skipped\n";
      continue;
    }
    out << std::setw(14) << format_real(o.trace_distance);
    std::vector<std::string> notes;
    if (!o.pool_error.empty()) notes.push_back("pool error: " + o.pool_error);
    if (o.non_hermitian_warning) notes.push_back("non-Hermitian product");
    if (o.pooled_min_eigenvalue < -DensityOperator::kTol) notes.push_back("indefinite");
    if (!o.compatible) notes.push_back("incompatible");
    for (std::size_t i = 0; i < notes.size(); ++i) out << (i ? ", " : "") << notes[i];
    out << "\n";
  }
  out << std::right << "evaluated " << r.evaluated << ", skipped " << r.skipped
      << " (p <= " << format_real(r.outcome_tol) << ")\n"
      << "max trace distance " << format_real(r.max_trace_distance) << ", mean "
      << format_real(r.mean_trace_distance) << "\n"
      << "probability sum " << format_real(r.probability_sum) << ", max marginal deviation "
      << format_real(r.max_marginal_deviation) << "\n";
}

// -- demo -----------------------------------------------------------------------------

struct DemoOptions {
  std::string name;
  std::string out;
  std::string save_scenario;
};

int quantum_demo(const DemoOptions& opt, std::ostream& out) {
  const bool ghz = opt.name == "ghz";
  const Scenario sc = ghz ? ghz_scenario() : example224_scenario();
  const auto start = Clock::now();
  const RunOptions run_opts;
  const auto report = run_scenario(sc, run_opts);
  const double wall = seconds_since(start);

  out << "demo " << opt.name << ": " << (ghz ? "GHZ state" : "state 224")
      << ", both parties measure {|+><+|, |-><-|}\n";
  const auto& rec = report.outcomes.front();
  out << "outcome (+, +), p = " << format_real(rec.probability) << "\n";
  print_matrix(out, "alpha", rec.posteriors[0]);
  print_matrix(out, "beta", rec.posteriors[1]);
  print_matrix(out, "rho", report.prior);
  print_matrix(out, "omega", rec.overseer);
  print_matrix(out, "pooled", rec.pooled);
  out << "trace distance(pooled, omega) = " << format_real(rec.trace_distance) << "\n";
  out << "max trace distance over " << report.evaluated << " outcomes = "
      << format_real(report.max_trace_distance) << "\n";

  bool pass;
  if (ghz) {
    pass = rec.trace_distance > kFailureDistance;
    out << "verdict: " << (pass ? "PASS" : "FAIL")
        << " (pooling is expected to fail here; distance " << format_real(rec.trace_distance)
        << ")\n";
  } else {
    pass = report.max_trace_distance < 1e-9;
    out << "verdict: " << (pass ? "PASS" : "FAIL")
        << " (pooling is expected to reproduce the overseer)\n";
  }

  if (!opt.save_scenario.empty()) {
    auto file = scenario_file_from(sc);
    file.state = NamedStateSpec{ghz ? "ghz" : "state224"};
    write_text_file_atomic(opt.save_scenario, emit_scenario_file(file));
    out << "scenario written to " << opt.save_scenario << "\n";
  }
  if (!opt.out.empty()) {
    ReportFile rf;
    rf.config = {{"command", "demo"}, {"name", opt.name}, {"outcome_tol", run_opts.outcome_tol}};
    rf.wall_time_seconds = wall;
    rf.report = report;
    write_report(opt.out, rf, out);
  }
  return pass ? kExitOk : kExitPredicateFailed;
}

ClassicalJoint independent_joint() {
  const std::array<double, 2> ps{0.5, 0.5};
  const double pa[2][2] = {{0.8, 0.2}, {0.3, 0.7}};  // pa[s][a]
  const double pb[2][2] = {{0.6, 0.4}, {0.1, 0.9}};
  std::vector<double> v(8);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t s = 0; s < 2; ++s) v[(a * 2 + b) * 2 + s] = ps[s] * pa[s][a] * pb[s][b];
  return ClassicalJoint({2, 2, 2}, v, {"a", "b", "s"});
}

ClassicalJoint redundant_joint() {
  std::vector<double> v(8, 0.0);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t s = 0; s < 2; ++s) v[(a * 2 + a) * 2 + s] = 0.5 * (a == s ? 0.8 : 0.2);
  return ClassicalJoint({2, 2, 2}, v, {"a", "b", "s"});
}

int classical_demo(const DemoOptions& opt, std::ostream& out) {
  if (!opt.out.empty() || !opt.save_scenario.empty())
    throw UsageError("--out and --save-scenario apply to the quantum demos only");
  const bool redundant = opt.name == "classical-redundant";
  const auto q = redundant ? redundant_joint() : independent_joint();
  const auto prior = hypothesis_marginal(q);
  const std::array<ClassicalDistribution, 2> posts{classical_bayes(q, {0, std::nullopt}),
                                                   classical_bayes(q, {std::nullopt, 0})};
  const auto pooled = classical_pool(prior, posts);
  const auto bayes = classical_bayes(q, {0, 0});
  const double tv = total_variation(pooled, bayes);

  out << "demo " << opt.name << ": "
      << (redundant ? "b copies a, a agrees with s with probability 0.8"
                    : "a and b conditionally independent given s")
      << "\n"
      << "conditionally independent: " << yes_no(is_conditionally_independent(q)) << "\n"
      << "p(s)        = " << format_distribution(prior) << "\n"
      << "p(s|a=0)    = " << format_distribution(posts[0]) << "\n"
      << "p(s|b=0)    = " << format_distribution(posts[1]) << "\n"
      << "pooled      = " << format_distribution(pooled) << "\n"
      << "p(s|a=0,b=0) = " << format_distribution(bayes) << "\n"
      << "total variation(pooled, bayes) = " << format_real(tv) << "\n";
  const bool pass = redundant ? tv > kFailureDistance : tv < 1e-12;
  out << "verdict: " << (pass ? "PASS" : "FAIL")
      << (redundant ? " (pooling is expected to fail here)" : " (pooling is expected to match Bayes)")
      << "\n";
  return pass ? kExitOk : kExitPredicateFailed;
}

// -- run ----------------------------------------------------------------------------------

struct RunCommandOptions {
  std::string path;
  double tol = RunOptions{}.outcome_tol;
  std::string out;
};

int run_command(const RunCommandOptions& opt, std::ostream& out) {
  if (!(opt.tol >= 0.0)) throw UsageError("--tol must be non-negative");
  const auto file = parse_scenario_file(read_text_file(opt.path));
  const auto sc = build_scenario(file);
  RunOptions run_opts;
  run_opts.outcome_tol = opt.tol;
  const auto start = Clock::now();
  const auto report = run_scenario(sc, run_opts);
  const double wall = seconds_since(start);
  print_report_table(out, report);
  if (!opt.out.empty()) {
    ReportFile rf;
    rf.config = {{"command", "run"}, {"scenario", opt.path}, {"outcome_tol", opt.tol}};
    rf.wall_time_seconds = wall;
    rf.report = report;
    write_report(opt.out, rf, out);
  }
  return kExitOk;
}

// -- verify -------------------------------------------------------------------------------

struct VerifyOptions {
  std::string category;
  std::size_t trials = 100;
  std::optional<std::uint64_t> seed;
  std::string dims;
  std::size_t jobs = 1;
  std::string out;
};

std::uint64_t parse_seed(const std::string& text, const std::string& source) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text.front() == '-')
    throw UsageError(source + ": invalid seed \"" + text + "\"");
  return v;
}

Dims parse_dims(const std::string& text) {
  Dims dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size() || v == 0 || v > 16)
      throw UsageError("--dims: invalid dimension \"" + part + "\"");
    dims.push_back(v);
  }
  return dims;
}

int verify_command(const VerifyOptions& opt, std::ostream& out) {
  SweepConfig config;
  config.category = sweep_category_from_string(opt.category);
  if (opt.trials == 0) throw UsageError("--trials must be at least 1");
  if (opt.jobs == 0) throw UsageError("--jobs must be at least 1");
  config.trials = opt.trials;
  config.jobs = opt.jobs;
  if (opt.seed) {
    config.master_seed = *opt.seed;
  } else if (const char* env = std::getenv("QPOOL_SEED"); env && *env) {
    config.master_seed = parse_seed(env, "QPOOL_SEED");
  }
  if (!opt.dims.empty()) {
    config.dims = parse_dims(opt.dims);
    const std::size_t want = config.category == SweepCategory::out_of_class ? 3 : 2;
    if (config.dims.size() != want)
      throw UsageError("--dims: class " + opt.category + " takes " + std::to_string(want) +
                       " dimensions" +
                       (want == 2 ? " (d_A,d_B; d_S is fixed by the class)" : " (d_A,d_B,d_S)"));
    if (want == 3 && config.dims[2] >= config.dims[0] * config.dims[1])
      throw UsageError("--dims: class none needs d_S < d_A d_B");
  }

  const auto start = Clock::now();
  const auto report = verification_sweep(config);
  const double wall = seconds_since(start);

  const bool none = config.category == SweepCategory::out_of_class;
  out << std::left;
  auto row = [&](const std::string& k, const std::string& v) {
    out << "  " << std::setw(24) << k << v << "\n";
  };
  out << "verification sweep\n";
  row("class", to_string(config.category));
  row("trials", std::to_string(config.trials));
  row("seed", std::to_string(config.master_seed));
  row("dims", config.dims.empty() ? std::string("random") : format_tuple(config.dims));
  row("jobs", std::to_string(config.jobs));
  row("max trace distance", format_real(report.max_trace_distance));
  row("mean trace distance", format_real(report.mean_trace_distance));
  row("failing trials", std::to_string(report.failing_trials) + "/" +
                            std::to_string(config.trials) + " (distance > " +
                            format_real(kFailureDistance) + ")");
  row("max |sum p - 1|", format_real(report.max_probability_sum_deviation));
  row("max marginal deviation", format_real(report.max_marginal_deviation));
  if (config.category == SweepCategory::class_ii)
    row("max commutator", format_real(report.max_commutator));
  row("all compatible", yes_no(report.all_compatible));
  row("all in intersection", yes_no(report.all_in_intersection));
  row("wall time (s)", format_real(wall));
  out << std::right;
  out << "predicate: "
      << (none ? "at least " + format_real(100 * kOutOfClassFailureFraction) +
                     "% of trials fail"
               : "max distance < " + format_real(kSweepDistanceBound))
      << ": " << (report.predicate_holds ? "holds" : "FAILS") << "\n";

  if (!opt.out.empty()) {
    ReportFile rf;
    rf.config = {{"command", "verify"},
                 {"class", to_string(config.category)},
                 {"trials", config.trials},
                 {"seed", config.master_seed},
                 {"dims", config.dims},
                 {"jobs", config.jobs}};
    rf.wall_time_seconds = wall;
    rf.report = report;
    write_report(opt.out, rf, out);
  }
  return report.predicate_holds ? kExitOk : kExitPredicateFailed;
}

// -- pool ---------------------------------------------------------------------------------

struct PoolOptions {
  std::string alpha, beta, rho;
  std::vector<std::string> more;
  std::string out;
};

// A matrix file holds either a bare matrix or an object with a "matrix" field.
DensityOperator load_density(const std::string& path) {
  const auto j = parse_json(read_text_file(path), path);
  const std::string where = path + ":$";
  const bool wrapped = j.is_object();
  if (wrapped && !j.contains("matrix")) throw ParseError(where + ".matrix", "missing field");
  const auto m = wrapped ? matrix_from_json(j["matrix"], where + ".matrix") : matrix_from_json(j, where);
  try {
    return DensityOperator(m);
  } catch (const ContractViolation& e) {
    throw ParseError(path, e.what());
  } catch (const NotPsdError& e) {
    throw ParseError(path, e.what());
  }
}

int pool_command(const PoolOptions& opt, std::ostream& out) {
  const auto rho = load_density(opt.rho);
  std::vector<DensityOperator> posts{load_density(opt.alpha), load_density(opt.beta)};
  for (const auto& p : opt.more) posts.push_back(load_density(p));
  for (std::size_t i = 0; i < posts.size(); ++i)
    if (posts[i].dim() != rho.dim())
      throw ParseError(i == 0 ? opt.alpha : i == 1 ? opt.beta : opt.more[i - 2],
                       "dimension " + std::to_string(posts[i].dim()) + " differs from rho (" +
                           std::to_string(rho.dim()) + ")");
  const auto r = pool_n(posts, rho);
  print_matrix(out, "pooled", r.pooled);
  out << "posteriors: " << posts.size() << "\n"
      << "hermiticity defect of product: " << format_real(r.hermiticity_defect)
      << (r.non_hermitian_warning ? " (warning: product is not Hermitian)" : "") << "\n"
      << "min eigenvalue: " << format_real(r.min_eigenvalue)
      << (r.is_density() ? "" : " (warning: not a density operator)") << "\n";
  if (!opt.out.empty()) {
    const Json doc = {{"format_version", kFormatVersion},
                      {"matrix", matrix_to_json(r.pooled)},
                      {"diagnostics",
                       {{"posteriors", posts.size()},
                        {"hermiticity_defect", r.hermiticity_defect},
                        {"non_hermitian_warning", r.non_hermitian_warning},
                        {"min_eigenvalue", r.min_eigenvalue},
                        {"is_density", r.is_density()}}}};
    write_text_file_atomic(opt.out, dump_json(doc));
    out << "pooled state written to " << opt.out << "\n";
  }
  return kExitOk;
}

}  // namespace

std::string format_real(double x) {
  if (x == 0.0) x = 0.0;
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

std::string format_complex(Complex z) {
  const double scale = std::max(std::abs(z.real()), std::abs(z.imag()));
  const double re = std::abs(z.real()) <= 1e-12 * std::max(1.0, scale) ? 0.0 : z.real();
  const double im = std::abs(z.imag()) <= 1e-12 * std::max(1.0, scale) ? 0.0 : z.imag();
  if (im == 0.0) return format_real(re);
  const std::string imag = format_real(std::abs(im)) + "i";
  if (re == 0.0) return (im < 0 ? "-" : "") + imag;
  return format_real(re) + (im < 0 ? "-" : "+") + imag;
}

std::string format_matrix(const ComplexMatrix& m, const std::string& indent) {
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      cells.push_back(format_complex(m(r, c)));
      width = std::max(width, cells.back().size());
    }
  std::ostringstream os;
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << indent << "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      os << (c ? "  " : "") << std::setw(static_cast<int>(width)) << cells[k++];
    os << "]\n";
  }
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pooling of quantum state assignments", "qpool"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  DemoOptions demo;
  auto* demo_cmd = app.add_subcommand("demo", "Run a fixed example and check its stated outcome");
  demo_cmd->add_option("name", demo.name, "Demo to run")
      ->required()
      ->check(CLI::IsMember({"example224", "ghz", "classical-redundant", "classical-independent"}));
  demo_cmd->add_option("--out", demo.out, "Write a JSON report");
  demo_cmd->add_option("--save-scenario", demo.save_scenario, "Write the scenario as JSON");

  RunCommandOptions run_opts;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("path", run_opts.path, "Scenario JSON file")->required();
  run_cmd->add_option("--tol", run_opts.tol, "Skip outcomes with probability at or below this");
  run_cmd->add_option("--out", run_opts.out, "Write a JSON report");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Randomized verification sweep");
  verify_cmd->add_option("--class", verify.category, "State class: i, ii or none")
      ->required()
      ->check(CLI::IsMember({"i", "ii", "none"}));
  verify_cmd->add_option("--trials", verify.trials, "Number of trials");
  std::string seed_text;
  verify_cmd->add_option("--seed", seed_text, "Master seed (default: $QPOOL_SEED, else 0)");
  verify_cmd->add_option("--dims", verify.dims, "d_A,d_B (classes i, ii) or d_A,d_B,d_S (none)");
  verify_cmd->add_option("--jobs", verify.jobs, "Worker threads");
  verify_cmd->add_option("--out", verify.out, "Write a JSON report");

  PoolOptions pool;
  auto* pool_cmd = app.add_subcommand("pool", "Pool posterior states given the prior");
  pool_cmd->add_option("--alpha", pool.alpha, "First posterior")->required();
  pool_cmd->add_option("--beta", pool.beta, "Second posterior")->required();
  pool_cmd->add_option("--rho", pool.rho, "Prior")->required();
  pool_cmd->add_option("--more", pool.more, "Further posteriors");
  pool_cmd->add_option("--out", pool.out, "Write the pooled state as JSON");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*demo_cmd) {
      return demo.name.rfind("classical", 0) == 0 ? classical_demo(demo, out)
                                                  : quantum_demo(demo, out);
    }
    if (*run_cmd) return run_command(run_opts, out);
    if (*verify_cmd) {
      if (!seed_text.empty()) verify.seed = parse_seed(seed_text, "--seed");
      return verify_command(verify, out);
    }
    return pool_command(pool, out);
  } catch (const UsageError& e) {
    err << "qpool: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "qpool: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "qpool: error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "qpool: internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace qpool::cli
