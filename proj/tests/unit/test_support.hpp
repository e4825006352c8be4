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

// Shared helpers for the unit tests: seeded random operators and matrix
// comparison.

#include <gtest/gtest.h>

#include "qpool/matrix_core.hpp"
#include "qpool/random.hpp"

namespace qpool::testing {

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t dim) {
  const ComplexMatrix g = rng.gaussian_matrix(dim, dim);
  return (g + g.adjoint()) / 2.0;
}

/// PSD matrix G G^dagger of the given rank.
inline ComplexMatrix random_psd(Rng& rng, std::size_t dim, std::size_t rank) {
  const ComplexMatrix g = rng.gaussian_matrix(dim, rank);
  return g * g.adjoint();
}

inline ComplexMatrix random_density_matrix(Rng& rng, std::size_t dim, std::size_t rank) {
  const ComplexMatrix p = random_psd(rng, dim, rank);
  const ComplexMatrix h = (p + p.adjoint()) / 2.0;
  return h / h.trace().real();
}

inline ComplexMatrix diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

inline ::testing::AssertionResult MatrixNear(const ComplexMatrix& a, const ComplexMatrix& b,
                                             double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    return ::testing::AssertionFailure()
           << "shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
  const double dev = max_abs(a - b);
  if (dev <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "max-abs deviation " << dev << " > " << tol << "\n"
                                       << a << "\n--- vs ---\n" << b;
}

}  // namespace qpool::testing
