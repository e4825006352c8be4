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

#include "qpool/scenario.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qpool/compatibility.hpp"
#include "qpool/errors.hpp"

namespace qpool {

namespace {

bool same_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

bool same_matrices(const std::vector<ComplexMatrix>& a, const std::vector<ComplexMatrix>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_matrix(a[i], b[i])) return false;
  return true;
}

std::string describe(const OutcomeTuple& t) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? "," : "") << t[i];
  os << ')';
  return os.str();
}

// Every tuple in row-major order (last party fastest).
std::vector<OutcomeTuple> all_tuples(const std::vector<std::size_t>& counts) {
  std::vector<OutcomeTuple> out;
  OutcomeTuple t(counts.size(), 0);
  while (true) {
    out.push_back(t);
    std::size_t i = counts.size();
    while (i-- > 0) {
      if (++t[i] < counts[i]) break;
      t[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

double max_commutator(const std::vector<ComplexMatrix>& ops) {
  double worst = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = i + 1; j < ops.size(); ++j)
      worst = std::max(worst, max_abs(ops[i] * ops[j] - ops[j] * ops[i]));
  return worst;
}

template <class E>
[[noreturn]] void rethrow_annotated(const E& e, const OutcomeTuple& t) {
  throw E("outcome " + describe(t) + ": " + e.what());
}

}  // namespace

std::string to_string(StateClass c) {
  switch (c) {
    case StateClass::class_i: return "i";
    case StateClass::class_ii: return "ii";
    case StateClass::out_of_class: return "none";
    case StateClass::unspecified: break;
  }
  return "unspecified";
}

StateClass state_class_from_string(const std::string& name) {
  if (name == "i") return StateClass::class_i;
  if (name == "ii") return StateClass::class_ii;
  if (name == "none") return StateClass::out_of_class;
  if (name == "unspecified") return StateClass::unspecified;
  throw ContractViolation("unknown state class '" + name + "'");
}

bool OutcomeRecord::operator==(const OutcomeRecord& o) const {
  return outcomes == o.outcomes && probability == o.probability && skipped == o.skipped &&
         same_matrices(posteriors, o.posteriors) &&
         posterior_probabilities == o.posterior_probabilities &&
         same_matrix(overseer, o.overseer) && same_matrix(pooled, o.pooled) &&
         trace_distance == o.trace_distance && hermiticity_defect == o.hermiticity_defect &&
         non_hermitian_warning == o.non_hermitian_warning &&
         pooled_min_eigenvalue == o.pooled_min_eigenvalue && pool_error == o.pool_error &&
         compatible == o.compatible && overseer_in_intersection == o.overseer_in_intersection &&
         max_commutator == o.max_commutator;
}

bool PoolingReport::operator==(const PoolingReport& o) const {
  return label == o.label && dims == o.dims && declared_class == o.declared_class &&
         passes_class_i_check == o.passes_class_i_check && same_matrix(prior, o.prior) &&
         outcome_tol == o.outcome_tol && outcomes == o.outcomes && evaluated == o.evaluated &&
         skipped == o.skipped && max_trace_distance == o.max_trace_distance &&
         mean_trace_distance == o.mean_trace_distance &&
         probability_sum == o.probability_sum &&
         max_marginal_deviation == o.max_marginal_deviation &&
         max_commutator == o.max_commutator && all_compatible == o.all_compatible &&
         all_in_intersection == o.all_in_intersection && pool_errors == o.pool_errors;
}

void validate_scenario(const Scenario& sc) {
  const auto& dims = sc.state.dims();
  if (dims.size() < 2)
    throw ContractViolation("scenario: state needs at least one party and the system S");
  if (sc.povms.size() != dims.size() - 1)
    throw ContractViolation("scenario: expected " + std::to_string(dims.size() - 1) +
                            " POVMs, got " + std::to_string(sc.povms.size()));
  for (std::size_t i = 0; i < sc.povms.size(); ++i)
    if (sc.povms[i].dim() != dims[i])
      throw ContractViolation("scenario: POVM " + std::to_string(i) + " has dimension " +
                              std::to_string(sc.povms[i].dim()) + ", subsystem has " +
                              std::to_string(dims[i]));
  if (sc.outcome_selection) {
    const auto& t = *sc.outcome_selection;
    if (t.size() != sc.povms.size())
      throw ContractViolation("scenario: outcome tuple needs one entry per party");
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] >= sc.povms[i].size())
        throw ContractViolation("scenario: outcome " + std::to_string(t[i]) +
                                " out of range for party " + std::to_string(i));
  }
}

PoolingReport run_scenario(const Scenario& sc, const RunOptions& options) {
  validate_scenario(sc);
  const auto& w = sc.state;
  const std::size_t parties = w.num_parties();

  PoolingReport report;
  report.label = sc.label;
  report.dims = w.dims();
  report.declared_class = sc.declared_class;
  report.passes_class_i_check = check_class_i(w);
  report.outcome_tol = options.outcome_tol;

  const DensityOperator rho = system_state(w);
  report.prior = rho.matrix();

  // Unnormalized single-party conditioned operators p_i(k) posterior_{i,k}.
  std::vector<std::size_t> counts;
  std::vector<std::vector<ComplexMatrix>> single(parties);
  for (std::size_t i = 0; i < parties; ++i) {
    counts.push_back(sc.povms[i].size());
    for (const auto& e : sc.povms[i].effects())
      single[i].push_back(unnormalized_conditioned(w, {{i, e}}));
  }

  const auto ds = static_cast<Eigen::Index>(w.system_dim());
  std::vector<std::vector<ComplexMatrix>> marginal_sums(parties);
  for (std::size_t i = 0; i < parties; ++i)
    marginal_sums[i].assign(counts[i], ComplexMatrix::Zero(ds, ds));

  const auto tuples = all_tuples(counts);
  std::vector<ComplexMatrix> joint;
  joint.reserve(tuples.size());
  for (const auto& t : tuples) {
    EffectMap effects;
    for (std::size_t i = 0; i < parties; ++i) effects.emplace(i, sc.povms[i].effect(t[i]));
    joint.push_back(unnormalized_conditioned(w, effects));
    report.probability_sum += joint.back().trace().real();
    for (std::size_t i = 0; i < parties; ++i) marginal_sums[i][t[i]] += joint.back();
  }
  for (std::size_t i = 0; i < parties; ++i)
    for (std::size_t k = 0; k < counts[i]; ++k)
      report.max_marginal_deviation = std::max(
          report.max_marginal_deviation, max_abs(marginal_sums[i][k] - single[i][k]));

  double distance_sum = 0.0;
  for (std::size_t n = 0; n < tuples.size(); ++n) {
    const auto& t = tuples[n];
    if (sc.outcome_selection && *sc.outcome_selection != t) continue;
    OutcomeRecord rec;
    rec.outcomes = t;
    rec.probability = joint[n].trace().real();
    if (!(rec.probability > options.outcome_tol)) {
      rec.skipped = true;
      ++report.skipped;
      report.outcomes.push_back(std::move(rec));
      continue;
    }
    try {
      std::vector<DensityOperator> posteriors;
      for (std::size_t i = 0; i < parties; ++i) {
        const ComplexMatrix& g = single[i][t[i]];
        const double p = g.trace().real();
        posteriors.push_back(DensityOperator(hermitian_part(g) / p));
        rec.posteriors.push_back(posteriors.back().matrix());
        rec.posterior_probabilities.push_back(p);
      }
      const DensityOperator omega(hermitian_part(joint[n]) / rec.probability);
      rec.overseer = omega.matrix();

      if (parties >= 2) {
        try {
          const PoolResult pooled = pool_n(posteriors, rho, options.numeric_tol);
          rec.pooled = pooled.pooled;
          rec.hermiticity_defect = pooled.hermiticity_defect;
          rec.non_hermitian_warning = pooled.non_hermitian_warning;
          rec.pooled_min_eigenvalue = pooled.min_eigenvalue;
          rec.trace_distance = trace_distance(rec.pooled, rec.overseer);
        } catch (const EmptyPoolError& e) {
          rec.pool_error = e.what();
        } catch (const SupportError& e) {
          rec.pool_error = e.what();
        }
      } else {
        // A single party's posterior is already the overseer's state.
        rec.pooled = posteriors.front().matrix();
        rec.pooled_min_eigenvalue = herm_eig(rec.pooled).eigenvalues(ds - 1);
        rec.trace_distance = trace_distance(rec.pooled, rec.overseer);
      }
      if (!rec.pool_error.empty()) {
        rec.trace_distance = std::numeric_limits<double>::infinity();
        ++report.pool_errors;
      }

      rec.compatible = true;
      for (std::size_t i = 0; i < parties; ++i)
        for (std::size_t j = i + 1; j < parties; ++j)
          rec.compatible = rec.compatible && bfm_compatible(posteriors[i], posteriors[j]);
      rec.overseer_in_intersection = state_in_intersection(rec.overseer, posteriors);

      std::vector<ComplexMatrix> ops = rec.posteriors;
      ops.push_back(rho.matrix());
      rec.max_commutator = max_commutator(ops);
    } catch (const NumericError& e) {
      rethrow_annotated(e, t);
    } catch (const NotPsdError& e) {
      rethrow_annotated(e, t);
    } catch (const ContractViolation& e) {
      rethrow_annotated(e, t);
    }

    ++report.evaluated;
    distance_sum += rec.trace_distance;
    report.max_trace_distance = std::max(report.max_trace_distance, rec.trace_distance);
    report.max_commutator = std::max(report.max_commutator, rec.max_commutator);
    report.all_compatible = report.all_compatible && rec.compatible;
    report.all_in_intersection = report.all_in_intersection && rec.overseer_in_intersection;
    report.outcomes.push_back(std::move(rec));
  }
  if (report.evaluated > 0)
    report.mean_trace_distance = distance_sum / static_cast<double>(report.evaluated);
  return report;
}

Povm plus_minus_povm() {
  ComplexMatrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;
  return Povm({plus, minus});
}

Scenario example224_scenario() {
  return Scenario{state_224(), {plus_minus_povm(), plus_minus_povm()}, std::nullopt,
                  "example224", std::nullopt, StateClass::class_i};
}

Scenario ghz_scenario(bool logical_basis) {
  const Povm p = logical_basis ? Povm::computational(2) : plus_minus_povm();
  return Scenario{ghz_state(), {p, p}, std::nullopt,
                  logical_basis ? "ghz-logical" : "ghz", std::nullopt,
                  StateClass::out_of_class};
}

ClassIParameters random_class_i_parameters(const Dims& party_dims, std::uint64_t seed) {
  const std::size_t d = product(party_dims);
  Rng rng(seed);
  DensityOperator rho = random_full_rank_density(rng, d, 0.01);
  Isometry u(haar_unitary(rng, d));
  return {std::move(rho), std::move(u), party_dims};
}

Scenario random_class_i_scenario(const Dims& party_dims,
                                 const std::vector<std::size_t>& outcome_counts,
                                 std::uint64_t seed) {
  if (party_dims.empty() || outcome_counts.size() != party_dims.size())
    throw ContractViolation("random_class_i_scenario: one outcome count per party");
  const auto params = random_class_i_parameters(party_dims, seed);
  std::vector<Povm> povms;
  for (std::size_t i = 0; i < party_dims.size(); ++i)
    povms.push_back(random_povm(party_dims[i], outcome_counts[i], derive_seed(seed, i + 1)));
  return Scenario{class_i_state(params.rho, party_dims, params.u), std::move(povms),
                  std::nullopt, "class-i random", seed, StateClass::class_i};
}

Scenario random_class_ii_scenario(std::size_t n_terms, std::size_t d_a, std::size_t d_b,
                                  const std::vector<std::size_t>& block_dims,
                                  std::size_t outcomes_a, std::size_t outcomes_b,
                                  std::uint64_t seed) {
  if (n_terms == 0 || block_dims.size() != n_terms)
    throw ContractViolation("random_class_ii_scenario: one block per term required");
  std::size_t ds = 0;
  for (auto b : block_dims) {
    if (b == 0) throw ContractViolation("random_class_ii_scenario: empty block");
    ds += b;
  }
  Rng rng(seed);

  std::vector<double> weights(n_terms);
  {
    const double floor = 0.05;
    double total = 0.0;
    for (auto& x : weights) {
      const double g = rng.gaussian();
      x = g * g;
      total += x;
    }
    for (auto& x : weights) x = floor + (1.0 - floor * static_cast<double>(n_terms)) * x / total;
    // Remove the rounding residue so the weights pass the sum-to-one check.
    double sum = 0.0;
    for (auto x : weights) sum += x;
    for (auto& x : weights) x /= sum;
  }

  std::vector<DensityOperator> sigmas, taus, rhos;
  std::size_t offset = 0;
  for (std::size_t s = 0; s < n_terms; ++s) {
    sigmas.push_back(random_full_rank_density(rng, d_a));
    taus.push_back(random_full_rank_density(rng, d_b));
    const DensityOperator block = random_full_rank_density(rng, block_dims[s]);
    ComplexMatrix full = ComplexMatrix::Zero(static_cast<Eigen::Index>(ds),
                                             static_cast<Eigen::Index>(ds));
    const auto b = static_cast<Eigen::Index>(block_dims[s]);
    full.block(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(offset), b, b) =
        block.matrix();
    rhos.emplace_back(full);
    offset += block_dims[s];
  }

  std::vector<Povm> povms;
  povms.push_back(random_povm(d_a, outcomes_a, derive_seed(seed, 1)));
  povms.push_back(random_povm(d_b, outcomes_b, derive_seed(seed, 2)));
  return Scenario{class_ii_state(weights, sigmas, taus, rhos), std::move(povms), std::nullopt,
                  "class-ii random", seed, StateClass::class_ii};
}

Scenario random_out_of_class_scenario(std::size_t d_a, std::size_t d_b, std::size_t d_s,
                                      std::uint64_t seed) {
  if (d_a == 0 || d_b == 0 || d_s == 0 || d_s >= d_a * d_b)
    throw ContractViolation("random_out_of_class_scenario: need 1 <= d_s < d_a d_b");
  Rng rng(seed);
  const std::size_t na = rng.uniform_int(2, 4);
  const std::size_t nb = rng.uniform_int(2, 4);
  std::vector<Povm> povms;
  povms.push_back(random_povm(d_a, na, derive_seed(seed, 1)));
  povms.push_back(random_povm(d_b, nb, derive_seed(seed, 2)));
  return Scenario{haar_random_pure({d_a, d_b, d_s}, derive_seed(seed, 3)), std::move(povms),
                  std::nullopt, "out-of-class random", seed, StateClass::out_of_class};
}

}  // namespace qpool
