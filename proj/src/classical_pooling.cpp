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

#include <cmath>
#include <numeric>
#include <sstream>

#include "qpool/errors.hpp"
#include "qpool/pooling.hpp"

namespace qpool {

namespace {

void require_probability_vector(const std::vector<double>& p, double tol,
                                std::string_view what) {
  if (p.empty()) throw ContractViolation(std::string(what) + ": empty");
  double total = 0.0;
  for (double x : p) {
    if (!std::isfinite(x) || x < 0.0)
      throw ContractViolation(std::string(what) + ": negative or non-finite entry");
    total += x;
  }
  if (std::abs(total - 1.0) > tol) {
    std::ostringstream os;
    os << what << ": entries sum to " << total;
    throw ContractViolation(os.str());
  }
}

}  // namespace

ClassicalDistribution::ClassicalDistribution(std::vector<double> p) : p_(std::move(p)) {
  require_probability_vector(p_, kTol, "ClassicalDistribution");
}

ClassicalDistribution ClassicalDistribution::normalized(std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw ContractViolation("ClassicalDistribution: negative or non-finite weight");
    total += w;
  }
  if (!(total > 0.0)) throw EmptyPoolError("ClassicalDistribution: all weights vanish");
  for (double& w : weights) w /= total;
  return ClassicalDistribution(std::move(weights));
}

double total_variation(const ClassicalDistribution& p, const ClassicalDistribution& q) {
  if (p.size() != q.size()) throw ContractViolation("total_variation: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

ClassicalJoint::ClassicalJoint(std::vector<std::size_t> shape, std::vector<double> values,
                               std::vector<std::string> labels)
    : shape_(std::move(shape)), values_(std::move(values)), labels_(std::move(labels)) {
  if (shape_.size() < 2)
    throw ContractViolation("ClassicalJoint: need at least one data axis and the s axis");
  for (auto d : shape_)
    if (d == 0) throw ContractViolation("ClassicalJoint: zero-length axis");
  if (product(shape_) != values_.size())
    throw ContractViolation("ClassicalJoint: value count does not match shape");
  if (!labels_.empty() && labels_.size() != shape_.size())
    throw ContractViolation("ClassicalJoint: one label per axis required");
  require_probability_vector(values_, kTol, "ClassicalJoint");
}

double ClassicalJoint::at(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) throw ContractViolation("ClassicalJoint::at: rank mismatch");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (index[i] >= shape_[i]) throw ContractViolation("ClassicalJoint::at: out of range");
    flat = flat * shape_[i] + index[i];
  }
  return values_[flat];
}

ClassicalDistribution classical_pool(const ClassicalDistribution& prior,
                                     std::span<const ClassicalDistribution> posteriors) {
  if (posteriors.empty()) throw ContractViolation("classical_pool: no posteriors");
  for (const auto& p : posteriors)
    if (p.size() != prior.size()) throw ContractViolation("classical_pool: size mismatch");
  const double power = static_cast<double>(posteriors.size() - 1);
  std::vector<double> w(prior.size(), 0.0);
  for (std::size_t s = 0; s < prior.size(); ++s) {
    if (prior[s] == 0.0) continue;
    double v = 1.0;
    for (const auto& p : posteriors) v *= p[s];
    w[s] = v / std::pow(prior[s], power);
  }
  return ClassicalDistribution::normalized(std::move(w));
}

namespace {

// Calls f(index, value) for every cell of q in row-major order.
template <class F>
void for_each_cell(const ClassicalJoint& q, F&& f) {
  const auto& shape = q.shape();
  std::vector<std::size_t> idx(shape.size(), 0);
  for (double v : q.values()) {
    f(std::as_const(idx), v);
    for (std::size_t i = shape.size(); i-- > 0;) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }
}

}  // namespace

ClassicalDistribution hypothesis_marginal(const ClassicalJoint& q) {
  std::vector<double> ps(q.hypotheses(), 0.0);
  for_each_cell(q, [&](const auto& idx, double v) { ps[idx.back()] += v; });
  return ClassicalDistribution::normalized(std::move(ps));
}

bool is_conditionally_independent(const ClassicalJoint& q, double tol) {
  const std::size_t k = q.data_axes();
  const std::size_t ns = q.hypotheses();
  std::vector<double> ps(ns, 0.0);
  // marg[i][x * ns + s] = q(x_i = x, s)
  std::vector<std::vector<double>> marg(k);
  for (std::size_t i = 0; i < k; ++i) marg[i].assign(q.shape()[i] * ns, 0.0);
  for_each_cell(q, [&](const auto& idx, double v) {
    const std::size_t s = idx.back();
    ps[s] += v;
    for (std::size_t i = 0; i < k; ++i) marg[i][idx[i] * ns + s] += v;
  });

  bool independent = true;
  for_each_cell(q, [&](const auto& idx, double v) {
    const std::size_t s = idx.back();
    if (!(ps[s] > tol)) return;
    double factored = 1.0;
    for (std::size_t i = 0; i < k; ++i) factored *= marg[i][idx[i] * ns + s] / ps[s];
    if (std::abs(v / ps[s] - factored) > tol) independent = false;
  });
  return independent;
}

ClassicalDistribution classical_bayes(const ClassicalJoint& q,
                                      const std::vector<std::optional<std::size_t>>& observed) {
  if (observed.size() != q.data_axes())
    throw ContractViolation("classical_bayes: one (optional) observation per data axis");
  for (std::size_t i = 0; i < observed.size(); ++i)
    if (observed[i] && *observed[i] >= q.shape()[i])
      throw ContractViolation("classical_bayes: observed value out of range");
  std::vector<double> w(q.hypotheses(), 0.0);
  for_each_cell(q, [&](const auto& idx, double v) {
    for (std::size_t i = 0; i < observed.size(); ++i)
      if (observed[i] && idx[i] != *observed[i]) return;
    w[idx.back()] += v;
  });
  double total = 0.0;
  for (double x : w) total += x;
  if (!(total > 0.0))
    throw ZeroProbabilityError("classical_bayes: observation has zero probability");
  return ClassicalDistribution::normalized(std::move(w));
}

}  // namespace qpool
