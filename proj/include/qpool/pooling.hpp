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

// Pooling of posterior state assignments that share a prior.
//
// Quantum: omega ~ alpha rho^+ beta (two parties) and the alternating chain
// alpha rho^+ beta rho^+ ... zeta for N parties, with rho^+ the inverse of
// rho on its support.
//
// Classical: p(s|a,b,...) ~ p(s|a) p(s|b) ... / p(s)^(N-1) on supp p(s),
// together with the exact Bayes conditional that it is compared against.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpool/quantum_states.hpp"

namespace qpool {

/// Relative non-Hermiticity of the raw chain product above which the pooled
/// result carries a warning.
inline constexpr double kPoolHermiticityWarning = 1e-6;
/// Max-abs slack allowed in P_rho x P_rho == x for each posterior x.
inline constexpr double kSupportContainmentTol = 1e-8;

struct PoolResult {
  /// Hermitian part of the chain product, divided by its trace.
  ComplexMatrix pooled;
  /// max|M - M^dagger| / max|M| of the raw product M.
  double hermiticity_defect = 0.0;
  bool non_hermitian_warning = false;
  double min_eigenvalue = 0.0;

  /// True when `pooled` is a valid density operator. Outside the validated
  /// state classes the Hermitian part may be indefinite.
  bool is_density() const noexcept { return min_eigenvalue >= -DensityOperator::kTol; }
  /// Throws NotPsdError when !is_density().
  DensityOperator state() const;
};

PoolResult pool_two(const DensityOperator& alpha, const DensityOperator& beta,
                    const DensityOperator& rho, double tol = kDefaultRankTol);

/// posteriors.size() >= 2; the chain is taken in the given order.
PoolResult pool_n(std::span<const DensityOperator> posteriors,
                  const DensityOperator& rho, double tol = kDefaultRankTol);

// -- classical ----------------------------------------------------------------

/// Finite probability vector; nonnegative and summing to 1 within 1e-12.
class ClassicalDistribution {
 public:
  static constexpr double kTol = 1e-12;
  explicit ClassicalDistribution(std::vector<double> p);
  /// Divides by the sum; throws EmptyPoolError if the sum is not positive.
  static ClassicalDistribution normalized(std::vector<double> weights);

  const std::vector<double>& probabilities() const noexcept { return p_; }
  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_.at(i); }

 private:
  std::vector<double> p_;
};

double total_variation(const ClassicalDistribution& p, const ClassicalDistribution& q);

/// Joint distribution q(x_0, ..., x_{k-1}, s) stored row-major. The last axis
/// is the hypothesis s; the others are the parties' data.
class ClassicalJoint {
 public:
  static constexpr double kTol = 1e-12;
  ClassicalJoint(std::vector<std::size_t> shape, std::vector<double> values,
                 std::vector<std::string> labels = {});

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t data_axes() const noexcept { return shape_.size() - 1; }
  std::size_t hypotheses() const noexcept { return shape_.back(); }
  double at(std::span<const std::size_t> index) const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> values_;
  std::vector<std::string> labels_;
};

/// Requires posteriors.size() >= 1 and matching sizes. Entries where the
/// prior vanishes are assigned zero.
ClassicalDistribution classical_pool(const ClassicalDistribution& prior,
                                     std::span<const ClassicalDistribution> posteriors);

/// For every s with p(s) > tol: max |p(x_0,...|s) - prod_i p(x_i|s)| <= tol.
bool is_conditionally_independent(const ClassicalJoint& q, double tol = 1e-12);

/// Exact p(s | observed data). observed[i] is the value seen on data axis i,
/// or nullopt if that party's data is not conditioned on.
ClassicalDistribution classical_bayes(const ClassicalJoint& q,
                                      const std::vector<std::optional<std::size_t>>& observed);

/// Prior p(s) of a joint.
ClassicalDistribution hypothesis_marginal(const ClassicalJoint& q);

}  // namespace qpool
