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

#pragma once

// End-to-end pooling experiments: a joint state, one POVM per party, and a
// harness that compares the pooled posterior against the overseer's state
// for every outcome tuple.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qpool/measurement.hpp"
#include "qpool/pooling.hpp"

namespace qpool {

enum class StateClass { unspecified, class_i, class_ii, out_of_class };

std::string to_string(StateClass c);
/// Inverse of to_string; throws ContractViolation on unknown names.
StateClass state_class_from_string(const std::string& name);

/// Outcome tuple, one index per party.
using OutcomeTuple = std::vector<std::size_t>;

struct Scenario {
  MultipartiteState state;
  /// One POVM per party (every subsystem except the last).
  std::vector<Povm> povms;
  /// nullopt evaluates every outcome tuple.
  std::optional<OutcomeTuple> outcome_selection;
  std::string label;
  std::optional<std::uint64_t> seed;
  StateClass declared_class = StateClass::unspecified;
};

/// Throws ContractViolation when POVM count or dimensions do not fit the
/// state, or the explicit outcome tuple is out of range.
void validate_scenario(const Scenario& sc);

struct RunOptions {
  /// Outcome tuples with probability at or below this are skipped.
  double outcome_tol = 1e-6;
  /// Rank/support tolerance handed to the pooling formula.
  double numeric_tol = kDefaultRankTol;
};

/// Trace distance above which an outcome counts as a pooling failure.
inline constexpr double kFailureDistance = 0.01;

struct OutcomeRecord {
  OutcomeTuple outcomes;
  double probability = 0.0;
  bool skipped = false;
  /// Per-party conditioned states (alpha, beta, ...) and their probabilities.
  std::vector<ComplexMatrix> posteriors;
  std::vector<double> posterior_probabilities;
  ComplexMatrix overseer;
  ComplexMatrix pooled;
  /// +infinity when pooling raised an error.
  double trace_distance = 0.0;
  double hermiticity_defect = 0.0;
  bool non_hermitian_warning = false;
  double pooled_min_eigenvalue = 0.0;
  std::string pool_error;
  bool compatible = false;
  bool overseer_in_intersection = false;
  /// Largest max-abs commutator among the posteriors and the prior.
  double max_commutator = 0.0;

  bool operator==(const OutcomeRecord& other) const;
};

struct PoolingReport {
  std::string label;
  Dims dims;
  StateClass declared_class = StateClass::unspecified;
  bool passes_class_i_check = false;
  ComplexMatrix prior;
  double outcome_tol = 0.0;
  std::vector<OutcomeRecord> outcomes;

  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  double max_trace_distance = 0.0;
  double mean_trace_distance = 0.0;
  /// Sum of p over every outcome tuple, selected or not.
  double probability_sum = 0.0;
  /// max over parties i, outcomes k of
  /// max-abs(sum_{tuples with t_i = k} p(t) omega_t - p_i(k) posterior_{i,k}).
  double max_marginal_deviation = 0.0;
  double max_commutator = 0.0;
  bool all_compatible = true;
  bool all_in_intersection = true;
  std::size_t pool_errors = 0;

  bool operator==(const PoolingReport& other) const;
};

PoolingReport run_scenario(const Scenario& sc, const RunOptions& options = {});

// -- named scenarios ------------------------------------------------------------

/// Two-outcome POVM {|+><+|, |-><-|} on a qubit.
Povm plus_minus_povm();

/// state_224 with both parties measuring the +/- basis.
Scenario example224_scenario();
/// GHZ with both parties measuring the +/- basis, or the logical basis.
Scenario ghz_scenario(bool logical_basis = false);

// -- random scenarios ------------------------------------------------------------

struct ClassIParameters {
  DensityOperator rho;
  Isometry u;
  Dims party_dims;
};

/// Full-rank rho on prod(party_dims) with eigenvalue floor 0.01 and a Haar
/// unitary U. Deterministic per seed.
ClassIParameters random_class_i_parameters(const Dims& party_dims, std::uint64_t seed);

Scenario random_class_i_scenario(const Dims& party_dims,
                                 const std::vector<std::size_t>& outcome_counts,
                                 std::uint64_t seed);

inline Scenario random_class_i_scenario(std::size_t d_a, std::size_t d_b,
                                        std::size_t outcomes_a, std::size_t outcomes_b,
                                        std::uint64_t seed) {
  return random_class_i_scenario({d_a, d_b}, {outcomes_a, outcomes_b}, seed);
}

/// Mixture of n_terms product states; rho_s is a random full-rank state on
/// the s-th block of S (block sizes block_dims, d_S = sum of blocks).
Scenario random_class_ii_scenario(std::size_t n_terms, std::size_t d_a, std::size_t d_b,
                                  const std::vector<std::size_t>& block_dims,
                                  std::size_t outcomes_a, std::size_t outcomes_b,
                                  std::uint64_t seed);

/// Haar-random pure state on (d_a, d_b, d_s) with d_s < d_a d_b and random
/// POVMs of 2 to 4 outcomes.
Scenario random_out_of_class_scenario(std::size_t d_a, std::size_t d_b, std::size_t d_s,
                                      std::uint64_t seed);

// -- sweeps --------------------------------------------------------------------------

enum class SweepCategory { class_i, class_ii, out_of_class };

std::string to_string(SweepCategory c);
SweepCategory sweep_category_from_string(const std::string& name);

struct SweepConfig {
  SweepCategory category = SweepCategory::class_i;
  std::size_t trials = 0;
  std::uint64_t master_seed = 0;
  /// class i / ii: {d_a, d_b}; out of class: {d_a, d_b, d_s}. Empty picks
  /// party dimensions from {2, 3} per trial (out of class defaults to 2,2,2).
  Dims dims;
  std::size_t jobs = 1;
  double outcome_tol = 1e-6;

  bool operator==(const SweepConfig&) const = default;
};

struct TrialSummary {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  Dims dims;
  std::vector<std::size_t> outcome_counts;
  std::size_t evaluated = 0;
  std::size_t skipped = 0;
  double max_trace_distance = 0.0;
  double mean_trace_distance = 0.0;
  bool has_failing_outcome = false;
  double probability_sum = 0.0;
  double max_marginal_deviation = 0.0;
  double max_commutator = 0.0;
  bool all_compatible = true;
  bool all_in_intersection = true;
  bool passes_class_i_check = false;
  std::size_t pool_errors = 0;

  bool operator==(const TrialSummary&) const = default;
};

struct SweepReport {
  SweepConfig config;
  std::vector<TrialSummary> trials;
  double max_trace_distance = 0.0;
  double mean_trace_distance = 0.0;
  std::size_t failing_trials = 0;
  double max_probability_sum_deviation = 0.0;
  double max_marginal_deviation = 0.0;
  double max_commutator = 0.0;
  bool all_compatible = true;
  bool all_in_intersection = true;
  bool predicate_holds = false;
  double wall_time_seconds = 0.0;

  /// Equality ignoring wall time.
  bool same_results(const SweepReport& other) const;
};

/// Scenario for trial `index` of a sweep, generated from
/// derive_seed(config.master_seed, index).
Scenario sweep_trial_scenario(const SweepConfig& config, std::size_t index);

/// Class i / ii: every trial's max trace distance below 1e-8.
/// Out of class: at least 95% of trials contain a failing outcome.
inline constexpr double kSweepDistanceBound = 1e-8;
inline constexpr double kOutOfClassFailureFraction = 0.95;

/// Runs config.trials independent trials on config.jobs worker threads.
/// Results do not depend on the number of workers.
SweepReport verification_sweep(const SweepConfig& config);

}  // namespace qpool
