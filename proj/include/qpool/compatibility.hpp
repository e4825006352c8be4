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

// Support-intersection compatibility of state assignments: two states are
// compatible iff their supports share a nonzero vector.

#include <span>

#include "qpool/quantum_states.hpp"

namespace qpool {

/// Relative slack on |lambda - k| when extracting the eigenvalue-k subspace
/// of P_1 + ... + P_k.
inline constexpr double kIntersectionTol = 1e-8;

/// Projector onto the intersection of the supports of all states. Zero
/// matrix when the supports do not intersect.
ComplexMatrix support_intersection_projector(std::span<const DensityOperator> states,
                                             double tol = kIntersectionTol);

inline ComplexMatrix support_intersection_projector(const DensityOperator& a,
                                                    const DensityOperator& b,
                                                    double tol = kIntersectionTol) {
  const DensityOperator both[] = {a, b};
  return support_intersection_projector(both, tol);
}

bool bfm_compatible(const DensityOperator& a, const DensityOperator& b,
                    double tol = kIntersectionTol);

/// P omega P == omega within tol (max-abs), P the intersection projector.
bool state_in_intersection(const ComplexMatrix& omega,
                           std::span<const DensityOperator> states,
                           double tol = kIntersectionTol);

inline bool state_in_intersection(const DensityOperator& omega, const DensityOperator& a,
                                  const DensityOperator& b, double tol = kIntersectionTol) {
  const DensityOperator both[] = {a, b};
  return state_in_intersection(omega.matrix(), both, tol);
}

}  // namespace qpool
