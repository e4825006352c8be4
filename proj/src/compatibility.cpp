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

#include "qpool/compatibility.hpp"

#include <cmath>

#include "qpool/errors.hpp"

namespace qpool {

ComplexMatrix support_intersection_projector(std::span<const DensityOperator> states,
                                             double tol) {
  if (states.empty())
    throw ContractViolation("support_intersection_projector: no states");
  const auto d = static_cast<Eigen::Index>(states.front().dim());
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& st : states) {
    if (static_cast<Eigen::Index>(st.dim()) != d)
      throw ContractViolation("support_intersection_projector: dimension mismatch");
    sum += support_projector(st.matrix());
  }
  // A unit vector reaches eigenvalue k of the sum iff every projector fixes it.
  const double k = static_cast<double>(states.size());
  const auto eig = herm_eig(hermitian_part(sum));
  ComplexMatrix p = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(eig.eigenvalues(i) - k) <= tol * k) {
      const auto v = eig.eigenvectors.col(i);
      p += v * v.adjoint();
    }
  }
  return p;
}

bool bfm_compatible(const DensityOperator& a, const DensityOperator& b, double tol) {
  return support_intersection_projector(a, b, tol).trace().real() > 0.5;
}

bool state_in_intersection(const ComplexMatrix& omega,
                           std::span<const DensityOperator> states, double tol) {
  const ComplexMatrix p = support_intersection_projector(states, tol);
  if (p.rows() != omega.rows() || p.cols() != omega.cols())
    throw ContractViolation("state_in_intersection: dimension mismatch");
  return max_abs(p * omega * p - omega) <= tol;
}

}  // namespace qpool
