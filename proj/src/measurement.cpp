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

#include "qpool/measurement.hpp"

#include <cmath>
#include <sstream>

#include "qpool/errors.hpp"

namespace qpool {

namespace {
constexpr int kPovmAttempts = 8;
constexpr double kPovmConditioning = 1e-9;
}  // namespace

Povm::Povm(std::vector<ComplexMatrix> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) throw ContractViolation("Povm: no effects");
  const auto d = effects_.front().rows();
  ComplexMatrix total = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    auto& e = effects_[i];
    require_square(e, "Povm effect");
    if (e.rows() != d) throw ContractViolation("Povm: effects differ in dimension");
    if (hermiticity_defect(e) > kTol)
      throw ContractViolation("Povm: effect " + std::to_string(i) + " not Hermitian");
    e = hermitian_part(e);
    const auto eig = herm_eig(e);
    if (eig.eigenvalues(d - 1) < -kTol)
      throw NotPsdError("Povm: effect " + std::to_string(i) + " not positive");
    total += e;
  }
  const double dev = max_abs(total - ComplexMatrix::Identity(d, d));
  if (dev > kTol) {
    std::ostringstream os;
    os << "Povm: effects sum to identity only within " << dev;
    throw ContractViolation(os.str());
  }
}

Povm Povm::trivial(std::size_t dim) { return Povm({identity(dim)}); }

Povm Povm::from_basis(const ComplexMatrix& unitary) {
  require_square(unitary, "Povm::from_basis");
  std::vector<ComplexMatrix> effects;
  for (Eigen::Index k = 0; k < unitary.cols(); ++k)
    effects.push_back(unitary.col(k) * unitary.col(k).adjoint());
  return Povm(std::move(effects));
}

Povm Povm::computational(std::size_t dim) { return from_basis(identity(dim)); }

const ComplexMatrix& Povm::effect(std::size_t i) const {
  if (i >= effects_.size())
    throw ContractViolation("Povm: outcome " + std::to_string(i) + " out of range");
  return effects_[i];
}

ComplexMatrix embed_effect(const ComplexMatrix& e, std::size_t slot, const Dims& dims) {
  if (slot >= dims.size()) throw ContractViolation("embed_effect: slot out of range");
  require_square(e, "embed_effect");
  if (static_cast<std::size_t>(e.rows()) != dims[slot])
    throw ContractViolation("embed_effect: effect dimension " + std::to_string(e.rows()) +
                            " != subsystem dimension " + std::to_string(dims[slot]));
  std::vector<ComplexMatrix> factors;
  for (std::size_t i = 0; i < dims.size(); ++i)
    factors.push_back(i == slot ? e : identity(dims[i]));
  return tensor_all(factors);
}

ComplexMatrix unnormalized_conditioned(const MultipartiteState& w,
                                       const EffectMap& effects) {
  const std::size_t parties = w.num_parties();
  std::vector<ComplexMatrix> factors;
  factors.reserve(parties);
  for (std::size_t i = 0; i < parties; ++i) factors.push_back(identity(w.dims()[i]));
  for (const auto& [slot, e] : effects) {
    if (slot >= parties)
      throw ContractViolation("condition_on_effects: no effect may act on S or beyond");
    require_square(e, "condition_on_effects");
    if (static_cast<std::size_t>(e.rows()) != w.dims()[slot])
      throw ContractViolation("condition_on_effects: effect on subsystem " +
                              std::to_string(slot) + " has wrong dimension");
    factors[slot] = e;
  }
  // Joint party effect K; G = sum_{i,j} K(i,j) W[(j,.),(i,.)].
  const ComplexMatrix k = tensor_all(factors);
  const auto ds = static_cast<Eigen::Index>(w.system_dim());
  const ComplexMatrix& m = w.matrix();
  ComplexMatrix g = ComplexMatrix::Zero(ds, ds);
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      const Complex kij = k(i, j);
      if (kij == Complex(0.0)) continue;
      g.noalias() += kij * m.block(j * ds, i * ds, ds, ds);
    }
  return g;
}

ConditionedState condition_on_effects(const MultipartiteState& w,
                                      const EffectMap& effects) {
  const ComplexMatrix g = unnormalized_conditioned(w, effects);
  const double p = g.trace().real();
  if (!(p > kZeroProbability)) {
    std::ostringstream os;
    os << "condition_on_effects: outcome probability " << p << " is zero";
    throw ZeroProbabilityError(os.str());
  }
  return {DensityOperator(hermitian_part(g) / p), p, {}};
}

ConditionedState update_on_outcomes(const MultipartiteState& w,
                                    const std::vector<Povm>& povms,
                                    const std::map<std::size_t, std::size_t>& outcomes) {
  EffectMap effects;
  std::vector<OutcomeLabel> labels;
  for (const auto& [party, outcome] : outcomes) {
    if (party >= povms.size())
      throw ContractViolation("update_on_outcomes: no POVM for party " + std::to_string(party));
    effects.emplace(party, povms[party].effect(outcome));
    labels.push_back({party, outcome});
  }
  auto out = condition_on_effects(w, effects);
  out.outcome_labels = std::move(labels);
  return out;
}

ConditionedState alice_update(const MultipartiteState& w, const Povm& povm_a,
                              std::size_t a) {
  auto out = condition_on_effects(w, {{0, povm_a.effect(a)}});
  out.outcome_labels = {{0, a}};
  return out;
}

ConditionedState bob_update(const MultipartiteState& w, const Povm& povm_b,
                            std::size_t b) {
  auto out = condition_on_effects(w, {{1, povm_b.effect(b)}});
  out.outcome_labels = {{1, b}};
  return out;
}

ConditionedState overseer_update(const MultipartiteState& w, const Povm& povm_a,
                                 std::size_t a, const Povm& povm_b, std::size_t b) {
  auto out = condition_on_effects(w, {{0, povm_a.effect(a)}, {1, povm_b.effect(b)}});
  out.outcome_labels = {{0, a}, {1, b}};
  return out;
}

DensityOperator closed_form_update_class_i(const DensityOperator& rho,
                                           const Isometry& u,
                                           const ComplexMatrix& effect) {
  require_square(effect, "closed_form_update_class_i");
  if (static_cast<std::size_t>(effect.rows()) != u.cols() || u.rows() != rho.dim())
    throw ContractViolation("closed_form_update_class_i: dimension mismatch");
  const ComplexMatrix root = sqrt_psd(rho.matrix());
  const ComplexMatrix g =
      root * u.matrix() * effect.transpose() * u.matrix().adjoint() * root;
  const double p = g.trace().real();
  if (!(p > kZeroProbability))
    throw ZeroProbabilityError("closed_form_update_class_i: outcome has zero probability");
  return DensityOperator(hermitian_part(g) / p);
}

Eigen::MatrixXd joint_outcome_distribution(const MultipartiteState& w,
                                           const Povm& povm_a, const Povm& povm_b) {
  if (w.num_parties() != 2)
    throw ContractViolation("joint_outcome_distribution: expected two parties");
  Eigen::MatrixXd p(static_cast<Eigen::Index>(povm_a.size()),
                    static_cast<Eigen::Index>(povm_b.size()));
  for (std::size_t a = 0; a < povm_a.size(); ++a)
    for (std::size_t b = 0; b < povm_b.size(); ++b)
      p(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          unnormalized_conditioned(w, {{0, povm_a.effect(a)}, {1, povm_b.effect(b)}})
              .trace()
              .real();
  return p;
}

Povm random_povm(std::size_t dim, std::size_t n_outcomes, std::uint64_t seed) {
  if (dim == 0 || n_outcomes == 0)
    throw ContractViolation("random_povm: need dim >= 1 and n_outcomes >= 1");
  if (n_outcomes == 1) return Povm::trivial(dim);
  for (int attempt = 0; attempt < kPovmAttempts; ++attempt) {
    Rng rng(attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::vector<ComplexMatrix> grams;
    ComplexMatrix total = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < n_outcomes; ++k) {
      const ComplexMatrix m = rng.gaussian_matrix(dim, dim);
      grams.push_back(hermitian_part(m.adjoint() * m));
      total += grams.back();
    }
    const auto eig = herm_eig(total);
    const double lmax = eig.eigenvalues(0);
    const double lmin = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (!(lmin > kPovmConditioning * lmax)) continue;
    const ComplexMatrix inv_root = spectral_map(eig, [](double x) { return 1.0 / std::sqrt(x); });
    std::vector<ComplexMatrix> effects;
    for (const auto& g : grams) effects.push_back(hermitian_part(inv_root * g * inv_root));
    return Povm(std::move(effects));
  }
  throw NumericError("random_povm: could not draw a well-conditioned POVM");
}

}  // namespace qpool
