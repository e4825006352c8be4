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

// Dense complex linear algebra for small quantum operators: tensor products,
// partial traces, a Hermitian eigensolver and the spectral functions built on
// top of it (square root, inverse on support, support projector, rank).
//
// Product bases are ordered row-major: for subsystems with dimensions
// (d_0, d_1, ..., d_{n-1}) the basis vector |i_0, i_1, ..., i_{n-1}> has index
// ((i_0 * d_1 + i_1) * d_2 + i_2) ... . Every module relies on this ordering,
// including the transpose in the indirect-measurement update rule.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qpool {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

/// Relative threshold (times the largest eigenvalue) below which an
/// eigenvalue counts as zero for rank and support decisions.
inline constexpr double kDefaultRankTol = 1e-9;
/// Absolute zero threshold used when the largest eigenvalue is itself zero.
inline constexpr double kAbsoluteZero = 1e-12;
/// Allowed max-abs deviation of h from h^dagger for Hermitian inputs.
inline constexpr double kHermitianTol = 1e-10;

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiOffDiagTol = 1e-13;

struct EigenDecomposition {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors; // columns, orthonormal
  int sweeps = 0;
};

// -- basic helpers ----------------------------------------------------------

ComplexMatrix identity(std::size_t dim);

/// |v><v| / <v|v>.
ComplexMatrix ket_projector(const ComplexVector& v);

/// Standard basis ket |index> in dimension dim.
ComplexVector basis_ket(std::size_t dim, std::size_t index);

double max_abs(const ComplexMatrix& m);

/// max-abs of m - m^dagger.
double hermiticity_defect(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

/// Throws ContractViolation unless m is square, non-empty and finite.
void require_square(const ComplexMatrix& m, std::string_view what);

/// Throws ContractViolation unless m is Hermitian within kHermitianTol
/// (scaled by max(1, max_abs(m))).
void require_hermitian(const ComplexMatrix& m, std::string_view what);

std::size_t product(const Dims& dims);

// -- structural operations --------------------------------------------------

/// Kronecker product a (x) b in row-major ordering.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Left-to-right Kronecker product of all factors; the empty list gives [1].
ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors);

/// Reduced operator on the subsystems listed in `keep`, in their original
/// relative order. `keep` must be a nonempty set of valid indices.
ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            std::vector<std::size_t> keep);

// -- spectral operations ----------------------------------------------------

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Eigenvalues are
/// sorted in descending order and each eigenvector's first nonzero component
/// is made real and positive.
EigenDecomposition herm_eig(const ComplexMatrix& h);

/// Apply f to the eigenvalues of h: V f(diag) V^dagger.
template <class F>
ComplexMatrix spectral_map(const EigenDecomposition& eig, F&& f) {
  const auto n = eig.eigenvalues.size();
  RealVector mapped(n);
  for (Eigen::Index i = 0; i < n; ++i) mapped(i) = f(eig.eigenvalues(i));
  return eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
}

/// Cutoff below which eigenvalues of a PSD operator with largest eigenvalue
/// lambda_max are treated as zero.
double support_cutoff(double lambda_max, double tol);

/// PSD square root; eigenvalues in [-tol, 0) are clamped to zero, anything
/// more negative raises NotPsdError.
ComplexMatrix sqrt_psd(const ComplexMatrix& h, double tol = kDefaultRankTol);

/// Inverse on the support: eigenvalues above tol * lambda_max are inverted,
/// the rest map to zero.
ComplexMatrix pinv_on_support(const ComplexMatrix& h,
                              double tol = kDefaultRankTol);

ComplexMatrix support_projector(const ComplexMatrix& h,
                                double tol = kDefaultRankTol);

std::size_t rank_of(const ComplexMatrix& h, double tol = kDefaultRankTol);

/// Half the sum of absolute eigenvalues of a - b.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qpool
