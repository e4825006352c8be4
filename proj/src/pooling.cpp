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

#include "qpool/pooling.hpp"

#include <sstream>

#include "qpool/errors.hpp"

namespace qpool {

DensityOperator PoolResult::state() const {
  if (!is_density()) {
    std::ostringstream os;
    os << "pooled operator is not positive (min eigenvalue " << min_eigenvalue << ")";
    throw NotPsdError(os.str());
  }
  return DensityOperator(pooled);
}

PoolResult pool_two(const DensityOperator& alpha, const DensityOperator& beta,
                    const DensityOperator& rho, double tol) {
  const DensityOperator posteriors[] = {alpha, beta};
  return pool_n(posteriors, rho, tol);
}

PoolResult pool_n(std::span<const DensityOperator> posteriors,
                  const DensityOperator& rho, double tol) {
  if (posteriors.size() < 2)
    throw ContractViolation("pool_n: at least two posteriors required");
  for (const auto& x : posteriors)
    if (x.dim() != rho.dim()) throw ContractViolation("pool_n: dimension mismatch");

  const ComplexMatrix support = support_projector(rho.matrix(), tol);
  for (std::size_t i = 0; i < posteriors.size(); ++i) {
    const ComplexMatrix& x = posteriors[i].matrix();
    const double leak = max_abs(support * x * support - x);
    if (leak > kSupportContainmentTol) {
      std::ostringstream os;
      os << "pool_n: posterior " << i << " leaves supp(rho) (max-abs " << leak << ")";
      throw SupportError(os.str());
    }
  }

  const ComplexMatrix rho_inv = pinv_on_support(rho.matrix(), tol);
  ComplexMatrix m = posteriors[0].matrix();
  for (std::size_t i = 1; i < posteriors.size(); ++i)
    m = m * rho_inv * posteriors[i].matrix();

  const double tr = m.trace().real();
  if (!(tr > tol)) {
    std::ostringstream os;
    os << "pool_n: pooled operator has trace " << tr;
    throw EmptyPoolError(os.str());
  }

  PoolResult out;
  const double scale = max_abs(m);
  out.hermiticity_defect = scale > 0.0 ? hermiticity_defect(m) / scale : 0.0;
  out.non_hermitian_warning = out.hermiticity_defect > kPoolHermiticityWarning;
  out.pooled = hermitian_part(m) / tr;
  const auto eig = herm_eig(out.pooled);
  out.min_eigenvalue = eig.eigenvalues(eig.eigenvalues.size() - 1);
  return out;
}

}  // namespace qpool
