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

// Local measurements on the parties and the resulting conditioned states of
// the target system S.

#include <cstdint>
#include <map>
#include <vector>

#include "qpool/quantum_states.hpp"

namespace qpool {

/// Finite POVM: positive effects summing to the identity within 1e-10.
class Povm {
 public:
  static constexpr double kTol = 1e-10;

  explicit Povm(std::vector<ComplexMatrix> effects);

  /// {I}
  static Povm trivial(std::size_t dim);
  /// Rank-one projectors onto the columns of a unitary.
  static Povm from_basis(const ComplexMatrix& unitary);
  static Povm computational(std::size_t dim);

  const std::vector<ComplexMatrix>& effects() const noexcept { return effects_; }
  const ComplexMatrix& effect(std::size_t i) const;
  std::size_t size() const noexcept { return effects_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(effects_.front().rows()); }

 private:
  std::vector<ComplexMatrix> effects_;
};

struct OutcomeLabel {
  std::size_t party = 0;
  std::size_t outcome = 0;
  bool operator==(const OutcomeLabel&) const = default;
};

struct ConditionedState {
  DensityOperator state;
  double probability = 0.0;
  std::vector<OutcomeLabel> outcome_labels;
};

/// Effects keyed by party (subsystem) index. Parties without an entry are
/// left unmeasured.
using EffectMap = std::map<std::size_t, ComplexMatrix>;

/// Conditioning below this trace is treated as a zero-probability outcome.
inline constexpr double kZeroProbability = 1e-12;

/// e on subsystem `slot`, identity elsewhere.
ComplexMatrix embed_effect(const ComplexMatrix& e, std::size_t slot, const Dims& dims);

/// Tr_{parties}[(E_0 (x) E_1 (x) ... (x) I_S) W] without normalization; its
/// trace is the joint probability of the effects.
ComplexMatrix unnormalized_conditioned(const MultipartiteState& w,
                                       const EffectMap& effects);

/// Normalized conditioned state of S. Throws ZeroProbabilityError when the
/// outcome probability is at most kZeroProbability.
ConditionedState condition_on_effects(const MultipartiteState& w,
                                      const EffectMap& effects);

/// Conditioning on outcomes of several parties' POVMs. `outcomes` maps party
/// index to outcome index; povms[i] belongs to party i.
ConditionedState update_on_outcomes(const MultipartiteState& w,
                                    const std::vector<Povm>& povms,
                                    const std::map<std::size_t, std::size_t>& outcomes);

ConditionedState alice_update(const MultipartiteState& w, const Povm& povm_a,
                              std::size_t a);
ConditionedState bob_update(const MultipartiteState& w, const Povm& povm_b,
                            std::size_t b);
ConditionedState overseer_update(const MultipartiteState& w, const Povm& povm_a,
                                 std::size_t a, const Povm& povm_b, std::size_t b);

/// sqrt(rho) U effect^T U^dagger sqrt(rho), normalized. The transpose is the
/// plain entrywise transpose in the parties' product basis, the same basis
/// class_i_state uses. `effect` acts on the joint party space.
DensityOperator closed_form_update_class_i(const DensityOperator& rho,
                                           const Isometry& u,
                                           const ComplexMatrix& effect);

/// p(a, b) = Tr[(E_a (x) F_b (x) I) W] for a two-party state.
Eigen::MatrixXd joint_outcome_distribution(const MultipartiteState& w,
                                           const Povm& povm_a, const Povm& povm_b);

/// Random POVM: E_k = T^{-1/2} G_k T^{-1/2} with G_k = M_k^dagger M_k for
/// complex Gaussian M_k and T = sum_k G_k. Ill-conditioned T triggers a
/// redraw from a derived seed, up to a fixed number of attempts.
Povm random_povm(std::size_t dim, std::size_t n_outcomes, std::uint64_t seed);

}  // namespace qpool
