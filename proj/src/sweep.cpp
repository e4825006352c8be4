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

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include "qpool/errors.hpp"
#include "qpool/scenario.hpp"

namespace qpool {

std::string to_string(SweepCategory c) {
  switch (c) {
    case SweepCategory::class_i: return "i";
    case SweepCategory::class_ii: return "ii";
    case SweepCategory::out_of_class: return "none";
  }
  return "?";
}

SweepCategory sweep_category_from_string(const std::string& name) {
  if (name == "i") return SweepCategory::class_i;
  if (name == "ii") return SweepCategory::class_ii;
  if (name == "none") return SweepCategory::out_of_class;
  throw ContractViolation("unknown sweep class '" + name + "' (expected i, ii or none)");
}

bool SweepReport::same_results(const SweepReport& o) const {
  return config == o.config && trials == o.trials &&
         max_trace_distance == o.max_trace_distance &&
         mean_trace_distance == o.mean_trace_distance && failing_trials == o.failing_trials &&
         max_probability_sum_deviation == o.max_probability_sum_deviation &&
         max_marginal_deviation == o.max_marginal_deviation &&
         max_commutator == o.max_commutator && all_compatible == o.all_compatible &&
         all_in_intersection == o.all_in_intersection && predicate_holds == o.predicate_holds;
}

namespace {

void check_config(const SweepConfig& config) {
  if (config.trials == 0) throw ContractViolation("verification_sweep: trials must be >= 1");
  const auto& d = config.dims;
  for (auto x : d)
    if (x == 0) throw ContractViolation("verification_sweep: zero dimension");
  switch (config.category) {
    case SweepCategory::class_i:
    case SweepCategory::class_ii:
      if (!d.empty() && d.size() != 2)
        throw ContractViolation("verification_sweep: class " + to_string(config.category) +
                                " takes party dimensions d_a,d_b only");
      break;
    case SweepCategory::out_of_class:
      if (!d.empty() && (d.size() != 3 || d[2] >= d[0] * d[1]))
        throw ContractViolation(
            "verification_sweep: out-of-class dims must be d_a,d_b,d_s with d_s < d_a*d_b");
      break;
  }
}

TrialSummary summarize(std::size_t index, std::uint64_t seed, const Scenario& sc,
                       const PoolingReport& r) {
  TrialSummary t;
  t.index = index;
  t.seed = seed;
  t.dims = sc.state.dims();
  for (const auto& p : sc.povms) t.outcome_counts.push_back(p.size());
  t.evaluated = r.evaluated;
  t.skipped = r.skipped;
  t.max_trace_distance = r.max_trace_distance;
  t.mean_trace_distance = r.mean_trace_distance;
  for (const auto& o : r.outcomes)
    if (!o.skipped && !(o.trace_distance <= kFailureDistance)) t.has_failing_outcome = true;
  t.probability_sum = r.probability_sum;
  t.max_marginal_deviation = r.max_marginal_deviation;
  t.max_commutator = r.max_commutator;
  t.all_compatible = r.all_compatible;
  t.all_in_intersection = r.all_in_intersection;
  t.passes_class_i_check = r.passes_class_i_check;
  t.pool_errors = r.pool_errors;
  return t;
}

}  // namespace

Scenario sweep_trial_scenario(const SweepConfig& config, std::size_t index) {
  const std::uint64_t seed = derive_seed(config.master_seed, index);
  Rng pick(seed);
  const std::uint64_t scenario_seed = derive_seed(seed, 0);
  auto party_dim = [&](std::size_t i) {
    return config.dims.empty() ? pick.uniform_int(2, 3) : config.dims[i];
  };
  switch (config.category) {
    case SweepCategory::class_i: {
      const std::size_t da = party_dim(0), db = party_dim(1);
      const std::size_t na = pick.uniform_int(2, 4), nb = pick.uniform_int(2, 4);
      return random_class_i_scenario(da, db, na, nb, scenario_seed);
    }
    case SweepCategory::class_ii: {
      const std::size_t da = party_dim(0), db = party_dim(1);
      const std::size_t na = pick.uniform_int(2, 4), nb = pick.uniform_int(2, 4);
      const std::size_t terms = pick.uniform_int(2, 3);
      std::vector<std::size_t> blocks;
      for (std::size_t s = 0; s < terms; ++s) blocks.push_back(pick.uniform_int(1, 2));
      return random_class_ii_scenario(terms, da, db, blocks, na, nb, scenario_seed);
    }
    case SweepCategory::out_of_class: {
      const Dims d = config.dims.empty() ? Dims{2, 2, 2} : config.dims;
      return random_out_of_class_scenario(d[0], d[1], d[2], scenario_seed);
    }
  }
  throw ContractViolation("sweep_trial_scenario: unknown category");
}

SweepReport verification_sweep(const SweepConfig& config) {
  check_config(config);
  const auto start = std::chrono::steady_clock::now();

  std::vector<TrialSummary> results(config.trials);
  std::vector<std::exception_ptr> errors(config.trials);
  const RunOptions options{config.outcome_tol, kDefaultRankTol};

  auto work = [&](std::size_t i) {
    try {
      const Scenario sc = sweep_trial_scenario(config, i);
      results[i] = summarize(i, derive_seed(config.master_seed, i), sc, run_scenario(sc, options));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(config.jobs, config.trials));
  if (jobs == 1) {
    for (std::size_t i = 0; i < config.trials; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < config.trials; i = next++) work(i);
      });
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Aggregation runs in trial order regardless of how trials were scheduled.
  SweepReport report;
  report.config = config;
  report.trials = std::move(results);
  double sum = 0.0;
  for (const auto& t : report.trials) {
    report.max_trace_distance = std::max(report.max_trace_distance, t.max_trace_distance);
    sum += t.mean_trace_distance;
    if (t.has_failing_outcome) ++report.failing_trials;
    report.max_probability_sum_deviation =
        std::max(report.max_probability_sum_deviation, std::abs(t.probability_sum - 1.0));
    report.max_marginal_deviation =
        std::max(report.max_marginal_deviation, t.max_marginal_deviation);
    report.max_commutator = std::max(report.max_commutator, t.max_commutator);
    report.all_compatible = report.all_compatible && t.all_compatible;
    report.all_in_intersection = report.all_in_intersection && t.all_in_intersection;
  }
  report.mean_trace_distance = sum / static_cast<double>(report.trials.size());

  if (config.category == SweepCategory::out_of_class) {
    const auto needed = static_cast<std::size_t>(
        std::ceil(kOutOfClassFailureFraction * static_cast<double>(config.trials)));
    report.predicate_holds = report.failing_trials >= needed;
  } else {
    report.predicate_holds = report.max_trace_distance < kSweepDistanceBound;
  }

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace qpool
