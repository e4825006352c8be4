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

#include "qpool/serialization.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "qpool/errors.hpp"

namespace qpool {

const char* const kToolVersion = "0.1.0";

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "." + key; }
std::string item(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& field(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) throw ParseError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(child(path, key), "missing field");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const Json& array_at(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array");
  return j;
}

double get_double(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path, "expected a number");
  return j.get<double>();
}

// null stands for +infinity.
Json num(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
double get_num(const Json& j, const std::string& path) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return get_double(j, path);
}

std::uint64_t get_uint(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw ParseError(path, "expected a non-negative integer");
}

std::size_t get_size(const Json& j, const std::string& path) {
  return static_cast<std::size_t>(get_uint(j, path));
}

bool get_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) throw ParseError(path, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<std::size_t> get_sizes(const Json& j, const std::string& path) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < array_at(j, path).size(); ++i) out.push_back(get_size(j[i], item(path, i)));
  return out;
}

std::vector<double> get_nums(const Json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array_at(j, path).size(); ++i) out.push_back(get_num(j[i], item(path, i)));
  return out;
}

Json nums_to_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

ComplexMatrix matrix_from_json_impl(const Json& j, const std::string& path, bool allow_empty) {
  array_at(j, path);
  if (j.empty()) {
    if (allow_empty) return ComplexMatrix();
    throw ParseError(path, "empty matrix");
  }
  const std::size_t rows = j.size();
  const std::size_t cols = array_at(j[0], item(path, 0)).size();
  if (cols == 0) throw ParseError(item(path, 0), "empty row");
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    const auto rp = item(path, r);
    if (array_at(j[r], rp).size() != cols)
      throw ParseError(rp, "row has " + std::to_string(j[r].size()) + " entries, expected " +
                               std::to_string(cols));
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(j[r][c], item(rp, c));
  }
  return m;
}

std::vector<ComplexMatrix> matrices_from_json(const Json& j, const std::string& path,
                                              bool allow_empty = false) {
  std::vector<ComplexMatrix> out;
  for (std::size_t i = 0; i < array_at(j, path).size(); ++i)
    out.push_back(matrix_from_json_impl(j[i], item(path, i), allow_empty));
  return out;
}

Json matrices_to_json(const std::vector<ComplexMatrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

bool same_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

bool same_matrices(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_matrix(a[i], b[i])) return false;
  return true;
}

void check_format_version(const Json& j) {
  const auto& v = field(j, "$", "format_version");
  if (!v.is_number_integer() || v.get<std::int64_t>() != kFormatVersion)
    throw ParseError("$.format_version", "unsupported format version " + v.dump());
}

// Arrays of numbers, or of arrays of numbers, stay on one line so that each
// matrix row reads as a single line.
bool is_flat(const Json& j, int depth) {
  if (!j.is_array()) return !j.is_object();
  if (depth == 0) return false;
  return std::all_of(j.begin(), j.end(), [&](const Json& e) { return is_flat(e, depth - 1); });
}

void pretty(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  if (is_flat(j, 2)) {
    os << j.dump();
  } else if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      os << pad << Json(it.key()).dump() << ": ";
      pretty(os, it.value(), indent + 2);
      os << (i + 1 < j.size() ? ",\n" : "\n");
    }
    os << std::string(static_cast<std::size_t>(indent), ' ') << "}";
  } else {
    os << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      os << pad;
      pretty(os, j[i], indent + 2);
      os << (i + 1 < j.size() ? ",\n" : "\n");
    }
    os << std::string(static_cast<std::size_t>(indent), ' ') << "]";
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::ostringstream os;
  pretty(os, j, 0);
  os << "\n";
  return os.str();
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    throw ParseError(path, "expected a complex number [re, im], got " + j.dump());
  return {get_double(j[0], item(path, 0)), get_double(j[1], item(path, 1))};
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& path) {
  return matrix_from_json_impl(j, path, false);
}

// -- scenario documents ------------------------------------------------------------

bool DensityStateSpec::operator==(const DensityStateSpec& o) const { return same_matrix(rho, o.rho); }

bool ClassIStateSpec::operator==(const ClassIStateSpec& o) const {
  return same_matrix(rho, o.rho) && same_matrix(u, o.u);
}

bool ClassIIStateSpec::operator==(const ClassIIStateSpec& o) const {
  return weights == o.weights && same_matrices(sigmas, o.sigmas) && same_matrices(taus, o.taus) &&
         same_matrices(rhos, o.rhos);
}

bool ScenarioFile::operator==(const ScenarioFile& o) const {
  if (povms.size() != o.povms.size()) return false;
  for (std::size_t i = 0; i < povms.size(); ++i)
    if (!same_matrices(povms[i], o.povms[i])) return false;
  return label == o.label && dims == o.dims && state == o.state && outcomes == o.outcomes &&
         seed == o.seed && declared_class == o.declared_class;
}

namespace {

StateSpec state_from_json(const Json& j, const std::string& path) {
  const auto kind = get_string(field(j, path, "kind"), child(path, "kind"));
  if (kind == "named") return NamedStateSpec{get_string(field(j, path, "name"), child(path, "name"))};
  if (kind == "density")
    return DensityStateSpec{matrix_from_json(field(j, path, "rho"), child(path, "rho"))};
  if (kind == "class_i")
    return ClassIStateSpec{matrix_from_json(field(j, path, "rho"), child(path, "rho")),
                           matrix_from_json(field(j, path, "u"), child(path, "u"))};
  if (kind == "class_ii") {
    ClassIIStateSpec s;
    const auto wp = child(path, "weights");
    const auto& w = array_at(field(j, path, "weights"), wp);
    for (std::size_t i = 0; i < w.size(); ++i) s.weights.push_back(get_double(w[i], item(wp, i)));
    s.sigmas = matrices_from_json(field(j, path, "sigmas"), child(path, "sigmas"));
    s.taus = matrices_from_json(field(j, path, "taus"), child(path, "taus"));
    s.rhos = matrices_from_json(field(j, path, "rhos"), child(path, "rhos"));
    return s;
  }
  throw ParseError(child(path, "kind"), "unknown state kind \"" + kind + "\"");
}

Json state_to_json(const StateSpec& spec) {
  struct Visitor {
    Json operator()(const NamedStateSpec& s) const { return {{"kind", "named"}, {"name", s.name}}; }
    Json operator()(const DensityStateSpec& s) const {
      return {{"kind", "density"}, {"rho", matrix_to_json(s.rho)}};
    }
    Json operator()(const ClassIStateSpec& s) const {
      return {{"kind", "class_i"}, {"rho", matrix_to_json(s.rho)}, {"u", matrix_to_json(s.u)}};
    }
    Json operator()(const ClassIIStateSpec& s) const {
      return {{"kind", "class_ii"},
              {"weights", s.weights},
              {"sigmas", matrices_to_json(s.sigmas)},
              {"taus", matrices_to_json(s.taus)},
              {"rhos", matrices_to_json(s.rhos)}};
    }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace

ScenarioFile scenario_file_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("$", "expected an object");
  check_format_version(j);
  ScenarioFile f;
  if (const auto* l = optional_field(j, "label")) f.label = get_string(*l, "$.label");
  f.dims = get_sizes(field(j, "$", "dims"), "$.dims");
  if (f.dims.empty()) throw ParseError("$.dims", "at least one subsystem required");
  if (const auto* c = optional_field(j, "class")) {
    try {
      f.declared_class = state_class_from_string(get_string(*c, "$.class"));
    } catch (const ContractViolation& e) {
      throw ParseError("$.class", e.what());
    }
  }
  f.state = state_from_json(field(j, "$", "state"), "$.state");
  const auto& povms = array_at(field(j, "$", "povms"), "$.povms");
  for (std::size_t i = 0; i < povms.size(); ++i)
    f.povms.push_back(matrices_from_json(povms[i], item("$.povms", i)));
  if (const auto* o = optional_field(j, "outcomes")) {
    if (o->is_string()) {
      if (o->get<std::string>() != "all")
        throw ParseError("$.outcomes", "expected \"all\" or an outcome tuple");
    } else {
      f.outcomes = get_sizes(*o, "$.outcomes");
    }
  }
  if (const auto* s = optional_field(j, "seed")) f.seed = get_uint(*s, "$.seed");
  return f;
}

Json scenario_file_to_json(const ScenarioFile& f) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["label"] = f.label;
  j["dims"] = f.dims;
  if (f.declared_class != StateClass::unspecified) j["class"] = to_string(f.declared_class);
  j["state"] = state_to_json(f.state);
  Json povms = Json::array();
  for (const auto& p : f.povms) povms.push_back(matrices_to_json(p));
  j["povms"] = std::move(povms);
  j["outcomes"] = f.outcomes ? Json(*f.outcomes) : Json("all");
  if (f.seed) j["seed"] = *f.seed;
  return j;
}

ScenarioFile parse_scenario_file(const std::string& text) {
  return scenario_file_from_json(parse_json(text));
}

std::string emit_scenario_file(const ScenarioFile& f) {
  return dump_json(scenario_file_to_json(f));
}

namespace {

// Runs f, turning invariant violations into ParseError at `path`.
template <class F>
auto at_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const ContractViolation& e) {
    throw ParseError(path, e.what());
  } catch (const NotPsdError& e) {
    throw ParseError(path, e.what());
  } catch (const RankConditionError& e) {
    throw ParseError(path, e.what());
  } catch (const OrthogonalityError& e) {
    throw ParseError(path, e.what());
  }
}

std::vector<DensityOperator> densities(const std::vector<ComplexMatrix>& ms,
                                       const std::string& path) {
  std::vector<DensityOperator> out;
  for (std::size_t i = 0; i < ms.size(); ++i)
    out.push_back(at_path(item(path, i), [&] { return DensityOperator(ms[i]); }));
  return out;
}

MultipartiteState build_state(const ScenarioFile& f) {
  const Dims parties(f.dims.begin(), f.dims.end() - 1);
  struct Visitor {
    const ScenarioFile& f;
    const Dims& parties;
    MultipartiteState operator()(const NamedStateSpec& s) const {
      if (s.name == "ghz") return ghz_state();
      if (s.name == "state224") return state_224();
      throw ParseError("$.state.name", "unknown named state \"" + s.name + "\"");
    }
    MultipartiteState operator()(const DensityStateSpec& s) const {
      const auto rho = at_path("$.state.rho", [&] { return DensityOperator(s.rho); });
      return at_path("$.dims", [&] { return MultipartiteState(rho, f.dims); });
    }
    MultipartiteState operator()(const ClassIStateSpec& s) const {
      const auto rho = at_path("$.state.rho", [&] { return DensityOperator(s.rho); });
      const auto u = at_path("$.state.u", [&] { return Isometry(s.u); });
      return at_path("$.state", [&] { return class_i_state(rho, parties, u); });
    }
    MultipartiteState operator()(const ClassIIStateSpec& s) const {
      const auto sig = densities(s.sigmas, "$.state.sigmas");
      const auto tau = densities(s.taus, "$.state.taus");
      const auto rho = densities(s.rhos, "$.state.rhos");
      return at_path("$.state", [&] { return class_ii_state(s.weights, sig, tau, rho); });
    }
  };
  auto w = std::visit(Visitor{f, parties}, f.state);
  if (w.dims() != f.dims) {
    std::ostringstream os;
    os << "state has dims [";
    for (std::size_t i = 0; i < w.dims().size(); ++i) os << (i ? ", " : "") << w.dims()[i];
    os << "]";
    throw ParseError("$.dims", os.str());
  }
  return w;
}

}  // namespace

Scenario build_scenario(const ScenarioFile& f) {
  if (f.dims.size() < 2) throw ParseError("$.dims", "need at least one party and the system");
  Scenario sc{build_state(f), {}, f.outcomes, f.label, f.seed, f.declared_class};
  const std::size_t parties = f.dims.size() - 1;
  if (f.povms.size() != parties)
    throw ParseError("$.povms", "expected " + std::to_string(parties) + " POVMs, got " +
                                    std::to_string(f.povms.size()));
  for (std::size_t i = 0; i < parties; ++i) {
    const auto path = item("$.povms", i);
    sc.povms.push_back(at_path(path, [&] { return Povm(f.povms[i]); }));
    if (sc.povms.back().dim() != f.dims[i])
      throw ParseError(path, "effects have dimension " + std::to_string(sc.povms.back().dim()) +
                                 ", party has " + std::to_string(f.dims[i]));
  }
  if (f.outcomes) {
    if (f.outcomes->size() != parties)
      throw ParseError("$.outcomes", "expected one outcome per party");
    for (std::size_t i = 0; i < parties; ++i)
      if ((*f.outcomes)[i] >= sc.povms[i].size())
        throw ParseError(item("$.outcomes", i), "outcome index out of range");
  }
  at_path("$", [&] { validate_scenario(sc); return 0; });
  return sc;
}

ScenarioFile scenario_file_from(const Scenario& sc) {
  ScenarioFile f;
  f.label = sc.label;
  f.dims = sc.state.dims();
  f.state = DensityStateSpec{sc.state.matrix()};
  for (const auto& p : sc.povms) f.povms.push_back(p.effects());
  f.outcomes = sc.outcome_selection;
  f.seed = sc.seed;
  f.declared_class = sc.declared_class;
  return f;
}

// -- report documents -------------------------------------------------------------

namespace {

Json outcome_to_json(const OutcomeRecord& o) {
  return {{"outcomes", o.outcomes},
          {"probability", num(o.probability)},
          {"skipped", o.skipped},
          {"posteriors", matrices_to_json(o.posteriors)},
          {"posterior_probabilities", nums_to_json(o.posterior_probabilities)},
          {"overseer", matrix_to_json(o.overseer)},
          {"pooled", matrix_to_json(o.pooled)},
          {"trace_distance", num(o.trace_distance)},
          {"hermiticity_defect", num(o.hermiticity_defect)},
          {"non_hermitian_warning", o.non_hermitian_warning},
          {"pooled_min_eigenvalue", num(o.pooled_min_eigenvalue)},
          {"pool_error", o.pool_error},
          {"compatible", o.compatible},
          {"overseer_in_intersection", o.overseer_in_intersection},
          {"max_commutator", num(o.max_commutator)}};
}

OutcomeRecord outcome_from_json(const Json& j, const std::string& p) {
  auto f = [&](const char* key) -> const Json& { return field(j, p, key); };
  auto at = [&](const char* key) { return child(p, key); };
  OutcomeRecord o;
  o.outcomes = get_sizes(f("outcomes"), at("outcomes"));
  o.probability = get_num(f("probability"), at("probability"));
  o.skipped = get_bool(f("skipped"), at("skipped"));
  o.posteriors = matrices_from_json(f("posteriors"), at("posteriors"), true);
  o.posterior_probabilities = get_nums(f("posterior_probabilities"), at("posterior_probabilities"));
  o.overseer = matrix_from_json_impl(f("overseer"), at("overseer"), true);
  o.pooled = matrix_from_json_impl(f("pooled"), at("pooled"), true);
  o.trace_distance = get_num(f("trace_distance"), at("trace_distance"));
  o.hermiticity_defect = get_num(f("hermiticity_defect"), at("hermiticity_defect"));
  o.non_hermitian_warning = get_bool(f("non_hermitian_warning"), at("non_hermitian_warning"));
  o.pooled_min_eigenvalue = get_num(f("pooled_min_eigenvalue"), at("pooled_min_eigenvalue"));
  o.pool_error = get_string(f("pool_error"), at("pool_error"));
  o.compatible = get_bool(f("compatible"), at("compatible"));
  o.overseer_in_intersection =
      get_bool(f("overseer_in_intersection"), at("overseer_in_intersection"));
  o.max_commutator = get_num(f("max_commutator"), at("max_commutator"));
  return o;
}

StateClass class_from_json(const Json& j, const std::string& path) {
  try {
    return state_class_from_string(get_string(j, path));
  } catch (const ContractViolation& e) {
    throw ParseError(path, e.what());
  }
}

Json trial_to_json(const TrialSummary& t) {
  return {{"index", t.index},
          {"seed", t.seed},
          {"dims", t.dims},
          {"outcome_counts", t.outcome_counts},
          {"evaluated", t.evaluated},
          {"skipped", t.skipped},
          {"max_trace_distance", num(t.max_trace_distance)},
          {"mean_trace_distance", num(t.mean_trace_distance)},
          {"has_failing_outcome", t.has_failing_outcome},
          {"probability_sum", num(t.probability_sum)},
          {"max_marginal_deviation", num(t.max_marginal_deviation)},
          {"max_commutator", num(t.max_commutator)},
          {"all_compatible", t.all_compatible},
          {"all_in_intersection", t.all_in_intersection},
          {"passes_class_i_check", t.passes_class_i_check},
          {"pool_errors", t.pool_errors}};
}

TrialSummary trial_from_json(const Json& j, const std::string& p) {
  auto f = [&](const char* key) -> const Json& { return field(j, p, key); };
  auto at = [&](const char* key) { return child(p, key); };
  TrialSummary t;
  t.index = get_size(f("index"), at("index"));
  t.seed = get_uint(f("seed"), at("seed"));
  t.dims = get_sizes(f("dims"), at("dims"));
  t.outcome_counts = get_sizes(f("outcome_counts"), at("outcome_counts"));
  t.evaluated = get_size(f("evaluated"), at("evaluated"));
  t.skipped = get_size(f("skipped"), at("skipped"));
  t.max_trace_distance = get_num(f("max_trace_distance"), at("max_trace_distance"));
  t.mean_trace_distance = get_num(f("mean_trace_distance"), at("mean_trace_distance"));
  t.has_failing_outcome = get_bool(f("has_failing_outcome"), at("has_failing_outcome"));
  t.probability_sum = get_num(f("probability_sum"), at("probability_sum"));
  t.max_marginal_deviation = get_num(f("max_marginal_deviation"), at("max_marginal_deviation"));
  t.max_commutator = get_num(f("max_commutator"), at("max_commutator"));
  t.all_compatible = get_bool(f("all_compatible"), at("all_compatible"));
  t.all_in_intersection = get_bool(f("all_in_intersection"), at("all_in_intersection"));
  t.passes_class_i_check = get_bool(f("passes_class_i_check"), at("passes_class_i_check"));
  t.pool_errors = get_size(f("pool_errors"), at("pool_errors"));
  return t;
}

}  // namespace

Json pooling_report_to_json(const PoolingReport& r) {
  Json outcomes = Json::array();
  for (const auto& o : r.outcomes) outcomes.push_back(outcome_to_json(o));
  return {{"label", r.label},
          {"dims", r.dims},
          {"class", to_string(r.declared_class)},
          {"passes_class_i_check", r.passes_class_i_check},
          {"prior", matrix_to_json(r.prior)},
          {"outcome_tol", num(r.outcome_tol)},
          {"outcomes", std::move(outcomes)},
          {"evaluated", r.evaluated},
          {"skipped", r.skipped},
          {"max_trace_distance", num(r.max_trace_distance)},
          {"mean_trace_distance", num(r.mean_trace_distance)},
          {"probability_sum", num(r.probability_sum)},
          {"max_marginal_deviation", num(r.max_marginal_deviation)},
          {"max_commutator", num(r.max_commutator)},
          {"all_compatible", r.all_compatible},
          {"all_in_intersection", r.all_in_intersection},
          {"pool_errors", r.pool_errors}};
}

PoolingReport pooling_report_from_json(const Json& j, const std::string& p) {
  auto f = [&](const char* key) -> const Json& { return field(j, p, key); };
  auto at = [&](const char* key) { return child(p, key); };
  PoolingReport r;
  r.label = get_string(f("label"), at("label"));
  r.dims = get_sizes(f("dims"), at("dims"));
  r.declared_class = class_from_json(f("class"), at("class"));
  r.passes_class_i_check = get_bool(f("passes_class_i_check"), at("passes_class_i_check"));
  r.prior = matrix_from_json_impl(f("prior"), at("prior"), true);
  r.outcome_tol = get_num(f("outcome_tol"), at("outcome_tol"));
  const auto& outcomes = array_at(f("outcomes"), at("outcomes"));
  for (std::size_t i = 0; i < outcomes.size(); ++i)
    r.outcomes.push_back(outcome_from_json(outcomes[i], item(at("outcomes"), i)));
  r.evaluated = get_size(f("evaluated"), at("evaluated"));
  r.skipped = get_size(f("skipped"), at("skipped"));
  r.max_trace_distance = get_num(f("max_trace_distance"), at("max_trace_distance"));
  r.mean_trace_distance = get_num(f("mean_trace_distance"), at("mean_trace_distance"));
  r.probability_sum = get_num(f("probability_sum"), at("probability_sum"));
  r.max_marginal_deviation = get_num(f("max_marginal_deviation"), at("max_marginal_deviation"));
  r.max_commutator = get_num(f("max_commutator"), at("max_commutator"));
  r.all_compatible = get_bool(f("all_compatible"), at("all_compatible"));
  r.all_in_intersection = get_bool(f("all_in_intersection"), at("all_in_intersection"));
  r.pool_errors = get_size(f("pool_errors"), at("pool_errors"));
  return r;
}

Json sweep_report_to_json(const SweepReport& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials) trials.push_back(trial_to_json(t));
  const auto& c = r.config;
  return {{"config",
           {{"category", to_string(c.category)},
            {"trials", c.trials},
            {"master_seed", c.master_seed},
            {"dims", c.dims},
            {"jobs", c.jobs},
            {"outcome_tol", num(c.outcome_tol)}}},
          {"trials", std::move(trials)},
          {"max_trace_distance", num(r.max_trace_distance)},
          {"mean_trace_distance", num(r.mean_trace_distance)},
          {"failing_trials", r.failing_trials},
          {"max_probability_sum_deviation", num(r.max_probability_sum_deviation)},
          {"max_marginal_deviation", num(r.max_marginal_deviation)},
          {"max_commutator", num(r.max_commutator)},
          {"all_compatible", r.all_compatible},
          {"all_in_intersection", r.all_in_intersection},
          {"predicate_holds", r.predicate_holds},
          {"wall_time_seconds", num(r.wall_time_seconds)}};
}

SweepReport sweep_report_from_json(const Json& j, const std::string& p) {
  auto f = [&](const char* key) -> const Json& { return field(j, p, key); };
  auto at = [&](const char* key) { return child(p, key); };
  SweepReport r;
  const auto cp = at("config");
  const auto& cj = f("config");
  auto cf = [&](const char* key) -> const Json& { return field(cj, cp, key); };
  try {
    r.config.category = sweep_category_from_string(get_string(cf("category"), child(cp, "category")));
  } catch (const ContractViolation& e) {
    throw ParseError(child(cp, "category"), e.what());
  }
  r.config.trials = get_size(cf("trials"), child(cp, "trials"));
  r.config.master_seed = get_uint(cf("master_seed"), child(cp, "master_seed"));
  r.config.dims = get_sizes(cf("dims"), child(cp, "dims"));
  r.config.jobs = get_size(cf("jobs"), child(cp, "jobs"));
  r.config.outcome_tol = get_num(cf("outcome_tol"), child(cp, "outcome_tol"));
  const auto& trials = array_at(f("trials"), at("trials"));
  for (std::size_t i = 0; i < trials.size(); ++i)
    r.trials.push_back(trial_from_json(trials[i], item(at("trials"), i)));
  r.max_trace_distance = get_num(f("max_trace_distance"), at("max_trace_distance"));
  r.mean_trace_distance = get_num(f("mean_trace_distance"), at("mean_trace_distance"));
  r.failing_trials = get_size(f("failing_trials"), at("failing_trials"));
  r.max_probability_sum_deviation =
      get_num(f("max_probability_sum_deviation"), at("max_probability_sum_deviation"));
  r.max_marginal_deviation = get_num(f("max_marginal_deviation"), at("max_marginal_deviation"));
  r.max_commutator = get_num(f("max_commutator"), at("max_commutator"));
  r.all_compatible = get_bool(f("all_compatible"), at("all_compatible"));
  r.all_in_intersection = get_bool(f("all_in_intersection"), at("all_in_intersection"));
  r.predicate_holds = get_bool(f("predicate_holds"), at("predicate_holds"));
  r.wall_time_seconds = get_num(f("wall_time_seconds"), at("wall_time_seconds"));
  return r;
}

bool ReportFile::same_results(const ReportFile& o) const {
  if (tool_version != o.tool_version || config != o.config || report.index() != o.report.index())
    return false;
  if (const auto* p = std::get_if<PoolingReport>(&report)) return *p == std::get<PoolingReport>(o.report);
  return std::get<SweepReport>(report).same_results(std::get<SweepReport>(o.report));
}

bool ReportFile::operator==(const ReportFile& o) const {
  if (!same_results(o) || wall_time_seconds != o.wall_time_seconds) return false;
  if (const auto* s = std::get_if<SweepReport>(&report))
    return s->wall_time_seconds == std::get<SweepReport>(o.report).wall_time_seconds;
  return true;
}

Json report_file_to_json(const ReportFile& f) {
  const bool sweep = std::holds_alternative<SweepReport>(f.report);
  return {{"format_version", kFormatVersion},
          {"tool", "qpool"},
          {"tool_version", f.tool_version},
          {"kind", sweep ? "sweep" : "pooling"},
          {"config", f.config},
          {"wall_time_seconds", num(f.wall_time_seconds)},
          {"report", sweep ? sweep_report_to_json(std::get<SweepReport>(f.report))
                           : pooling_report_to_json(std::get<PoolingReport>(f.report))}};
}

ReportFile report_file_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("$", "expected an object");
  check_format_version(j);
  ReportFile f;
  f.tool_version = get_string(field(j, "$", "tool_version"), "$.tool_version");
  f.config = field(j, "$", "config");
  if (!f.config.is_object()) throw ParseError("$.config", "expected an object");
  f.wall_time_seconds = get_num(field(j, "$", "wall_time_seconds"), "$.wall_time_seconds");
  const auto kind = get_string(field(j, "$", "kind"), "$.kind");
  const auto& body = field(j, "$", "report");
  if (kind == "pooling")
    f.report = pooling_report_from_json(body, "$.report");
  else if (kind == "sweep")
    f.report = sweep_report_from_json(body, "$.report");
  else
    throw ParseError("$.kind", "unknown report kind \"" + kind + "\"");
  return f;
}

ReportFile parse_report_file(const std::string& text) {
  return report_file_from_json(parse_json(text));
}

std::string emit_report_file(const ReportFile& f) { return dump_json(report_file_to_json(f)); }

// -- files -------------------------------------------------------------------------------

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source, e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename onto " + path + ": " + ec.message());
  }
}

}  // namespace qpool
