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

#include "qpool/matrix_core.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "qpool/errors.hpp"
#include "test_support.hpp"

namespace qpool {
namespace {

using testing::diag;
using testing::MatrixNear;

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

// Independent route to the partial trace over the last subsystem of a
// bipartite operator: sum_k (I (x) <k|) m (I (x) |k>).
ComplexMatrix trace_out_last(const ComplexMatrix& m, std::size_t da, std::size_t db) {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(da),
                                          static_cast<Eigen::Index>(da));
  for (std::size_t k = 0; k < db; ++k) {
    const ComplexMatrix side = tensor(identity(da), basis_ket(db, k));
    out += side.adjoint() * m * side;
  }
  return out;
}

ComplexMatrix trace_out_first(const ComplexMatrix& m, std::size_t da, std::size_t db) {
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Eigen::Index>(db),
                                          static_cast<Eigen::Index>(db));
  for (std::size_t k = 0; k < da; ++k) {
    const ComplexMatrix side = tensor(basis_ket(da, k), identity(db));
    out += side.adjoint() * m * side;
  }
  return out;
}

TEST(Tensor, IdentityTimesIdentity) {
  EXPECT_TRUE(MatrixNear(tensor(identity(2), identity(2)), identity(4), 0.0));
}

TEST(Tensor, DiagonalOrdering) {
  EXPECT_TRUE(MatrixNear(tensor(diag({1, 0}), diag({0, 1})), diag({0, 1, 0, 0}), 0.0));
}

TEST(Tensor, FlipFlipMaps00To11) {
  const ComplexVector out = tensor(pauli_x(), pauli_x()) * basis_ket(4, 0);
  EXPECT_TRUE(MatrixNear(out, basis_ket(4, 3), 0.0));
}

TEST(Tensor, Associative) {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = rng.gaussian_matrix(2, 2);
    const auto b = rng.gaussian_matrix(3, 3);
    const auto c = rng.gaussian_matrix(2, 2);
    EXPECT_TRUE(MatrixNear(tensor(tensor(a, b), c), tensor(a, tensor(b, c)), 1e-14));
  }
}

TEST(PartialTrace, MaximallyMixed) {
  EXPECT_TRUE(MatrixNear(partial_trace(identity(4) / 4.0, {2, 2}, {0}), identity(2) / 2.0,
                         1e-15));
}

TEST(PartialTrace, BellStateGivesMaximallyMixed) {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::numbers::sqrt2;
  const ComplexMatrix bell = phi * phi.adjoint();
  EXPECT_TRUE(MatrixNear(partial_trace(bell, {2, 2}, {0}), identity(2) / 2.0, 1e-15));
  EXPECT_TRUE(MatrixNear(partial_trace(bell, {2, 2}, {1}), identity(2) / 2.0, 1e-15));
}

TEST(PartialTrace, ProductStateFactorizes) {
  Rng rng(3);
  const auto ra = testing::random_density_matrix(rng, 2, 2);
  const auto rb = testing::random_density_matrix(rng, 3, 3);
  EXPECT_TRUE(MatrixNear(partial_trace(tensor(ra, rb), {2, 3}, {0}), ra, 1e-14));
  EXPECT_TRUE(MatrixNear(partial_trace(tensor(ra, rb), {2, 3}, {1}), rb, 1e-14));
}

TEST(PartialTrace, AgreesWithBasisSandwich) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t da = rng.uniform_int(1, 4), db = rng.uniform_int(1, 4);
    const auto m = rng.gaussian_matrix(da * db, da * db);
    EXPECT_TRUE(MatrixNear(partial_trace(m, {da, db}, {0}), trace_out_last(m, da, db), 1e-12));
    EXPECT_TRUE(MatrixNear(partial_trace(m, {da, db}, {1}), trace_out_first(m, da, db), 1e-12));
  }
}

TEST(PartialTrace, PreservesTraceAndComposes) {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Dims dims{rng.uniform_int(1, 3), rng.uniform_int(1, 3), rng.uniform_int(1, 3)};
    const auto m = testing::random_density_matrix(rng, product(dims), 3);
    const auto keep_s = partial_trace(m, dims, {2});
    EXPECT_NEAR(std::abs(keep_s.trace() - m.trace()), 0.0, 1e-12);
    // Tracing out A first, then B, equals tracing out {A, B} at once.
    const auto no_a = partial_trace(m, dims, {1, 2});
    const auto stepwise = partial_trace(no_a, {dims[1], dims[2]}, {1});
    EXPECT_TRUE(MatrixNear(stepwise, keep_s, 1e-12));
    // Keeping a non-contiguous pair matches the explicit sandwich route after
    // the middle subsystem is traced.
    const auto keep_ac = partial_trace(m, dims, {2, 0});
    EXPECT_EQ(keep_ac.rows(), static_cast<Eigen::Index>(dims[0] * dims[2]));
    EXPECT_NEAR(std::abs(keep_ac.trace() - m.trace()), 0.0, 1e-12);
  }
}

TEST(PartialTrace, Errors) {
  EXPECT_THROW(partial_trace(identity(4), {2, 3}, {0}), ContractViolation);
  EXPECT_THROW(partial_trace(identity(4), {2, 2}, {}), ContractViolation);
  EXPECT_THROW(partial_trace(identity(4), {2, 2}, {2}), ContractViolation);
}

TEST(HermEig, Diagonal) {
  const auto eig = herm_eig(diag({1, 3}));
  EXPECT_DOUBLE_EQ(eig.eigenvalues(0), 3.0);
  EXPECT_DOUBLE_EQ(eig.eigenvalues(1), 1.0);
}

TEST(HermEig, PauliXClosedForm) {
  const auto eig = herm_eig(pauli_x());
  EXPECT_NEAR(eig.eigenvalues(0), 1.0, 1e-15);
  EXPECT_NEAR(eig.eigenvalues(1), -1.0, 1e-15);
  ComplexMatrix expected(2, 2);
  const double r = 1.0 / std::numbers::sqrt2;
  expected << r, r, r, -r;
  EXPECT_TRUE(MatrixNear(eig.eigenvectors, expected, 1e-14));
}

TEST(HermEig, ZeroMatrix) {
  const auto eig = herm_eig(ComplexMatrix::Zero(3, 3));
  EXPECT_EQ(eig.eigenvalues, RealVector::Zero(3));
}

TEST(HermEig, RejectsNonHermitian) {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  EXPECT_THROW(herm_eig(m), ContractViolation);
}

TEST(HermEig, ReconstructsRandomHermitianAndMatchesReferenceSolver) {
  Rng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = rng.uniform_int(1, 20);
    const auto h = testing::random_hermitian(rng, n);
    const auto eig = herm_eig(h);
    const auto& v = eig.eigenvectors;
    EXPECT_TRUE(MatrixNear(v * eig.eigenvalues.cast<Complex>().asDiagonal() * v.adjoint(), h,
                           1e-10));
    EXPECT_TRUE(MatrixNear(v.adjoint() * v, identity(n), 1e-10));
    EXPECT_NEAR(eig.eigenvalues.sum(), h.trace().real(), 1e-10);
    for (Eigen::Index i = 1; i < eig.eigenvalues.size(); ++i)
      EXPECT_GE(eig.eigenvalues(i - 1), eig.eigenvalues(i));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> ref(h);
    const RealVector ref_desc = ref.eigenvalues().reverse();
    EXPECT_LT((ref_desc - eig.eigenvalues).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(HermEig, PhaseConventionAndDeterminism) {
  Rng rng(9);
  const auto h = testing::random_hermitian(rng, 6);
  const auto a = herm_eig(h);
  const auto b = herm_eig(h);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.eigenvectors, b.eigenvectors);
  for (Eigen::Index k = 0; k < a.eigenvectors.cols(); ++k) {
    Eigen::Index i = 0;
    while (std::abs(a.eigenvectors(i, k)) <= 1e-12) ++i;
    EXPECT_EQ(a.eigenvectors(i, k).imag(), 0.0);
    EXPECT_GT(a.eigenvectors(i, k).real(), 0.0);
  }
}

TEST(SqrtPsd, ScalarIdentity) {
  EXPECT_TRUE(MatrixNear(sqrt_psd(identity(4) / 4.0), identity(4) / 2.0, 1e-15));
}

TEST(SqrtPsd, DiagonalWithKernel) {
  EXPECT_TRUE(MatrixNear(sqrt_psd(diag({4, 1, 0})), diag({2, 1, 0}), 1e-15));
}

TEST(SqrtPsd, SquaresBackOnRandomStates) {
  Rng rng(50);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng.uniform_int(1, 9);
    const auto rho = testing::random_density_matrix(rng, n, rng.uniform_int(1, n));
    const auto s = sqrt_psd(rho);
    EXPECT_TRUE(MatrixNear(s * s, rho, 1e-9));
    EXPECT_LT(hermiticity_defect(s), 1e-12);
    EXPECT_GE(herm_eig(s).eigenvalues(static_cast<Eigen::Index>(n) - 1), -1e-9);
    // sqrt(sqrt(h))^2 == sqrt(h)
    const auto q = sqrt_psd(s);
    EXPECT_TRUE(MatrixNear(q * q, s, 1e-8));
  }
}

TEST(SqrtPsd, ClampsRoundoffAndRejectsNegative) {
  EXPECT_TRUE(MatrixNear(sqrt_psd(diag({1, -1e-12})), diag({1, 0}), 1e-15));
  EXPECT_THROW(sqrt_psd(diag({1, -0.1})), NotPsdError);
}

TEST(PinvOnSupport, Identity) {
  EXPECT_TRUE(MatrixNear(pinv_on_support(identity(3)), identity(3), 1e-15));
}

TEST(PinvOnSupport, DiagonalWithKernel) {
  EXPECT_TRUE(MatrixNear(pinv_on_support(diag({0.5, 0.5, 0, 0})), diag({2, 2, 0, 0}), 1e-14));
}

TEST(PinvOnSupport, ZeroMapsToZero) {
  EXPECT_TRUE(MatrixNear(pinv_on_support(ComplexMatrix::Zero(2, 2)), ComplexMatrix::Zero(2, 2),
                         0.0));
}

TEST(PinvOnSupport, PenroseConditionsOnRandomPsd) {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng.uniform_int(1, 8);
    const auto h = testing::random_psd(rng, n, rng.uniform_int(1, n));
    const auto hp = pinv_on_support(h);
    EXPECT_TRUE(MatrixNear(h * hp * h, h, 1e-9 * std::max(1.0, max_abs(h))));
    EXPECT_TRUE(MatrixNear(hp * h * hp, hp, 1e-9 * std::max(1.0, max_abs(hp))));
    EXPECT_TRUE(MatrixNear(h * hp, support_projector(h), 1e-8));
    EXPECT_TRUE(MatrixNear(pinv_on_support(hp), h, 1e-8 * std::max(1.0, max_abs(h))));
  }
}

TEST(PinvOnSupport, RejectsNonPsd) {
  EXPECT_THROW(pinv_on_support(diag({1, -0.5})), NotPsdError);
}

TEST(SupportProjector, Examples) {
  EXPECT_TRUE(MatrixNear(support_projector(identity(3) / 3.0), identity(3), 1e-14));
  EXPECT_TRUE(MatrixNear(support_projector(diag({1, 0})), diag({1, 0}), 0.0));
}

TEST(SupportProjector, IdempotentWithMatchingRank) {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = rng.uniform_int(1, 8);
    const std::size_t r = rng.uniform_int(1, n);
    const auto h = testing::random_psd(rng, n, r);
    const auto p = support_projector(h);
    EXPECT_TRUE(MatrixNear(p * p, p, 1e-9));
    EXPECT_LT(hermiticity_defect(p), 1e-12);
    EXPECT_EQ(rank_of(p), rank_of(h));
    EXPECT_EQ(rank_of(h), r);
  }
}

TEST(RankOf, Examples) {
  EXPECT_EQ(rank_of(identity(4) / 4.0), 4u);
  EXPECT_EQ(rank_of(ket_projector(basis_ket(3, 1) + basis_ket(3, 2))), 1u);
  EXPECT_EQ(rank_of(ComplexMatrix::Zero(3, 3)), 0u);
  EXPECT_THROW(rank_of(diag({1, -1})), NotPsdError);
}

TEST(RankOf, ScaleInvariant) {
  EXPECT_EQ(rank_of(diag({1e-6, 1e-6, 0})), 2u);
  EXPECT_EQ(rank_of(diag({1e3, 1e-3})), 2u);
  EXPECT_EQ(rank_of(diag({1e6, 1e-6})), 1u);
  EXPECT_EQ(rank_of(diag({1, 1e-12})), 1u);
}

TEST(TraceDistance, Examples) {
  Rng rng(1);
  const auto rho = testing::random_density_matrix(rng, 3, 3);
  EXPECT_NEAR(trace_distance(rho, rho), 0.0, 1e-15);
  EXPECT_NEAR(trace_distance(diag({1, 0}), diag({0, 1})), 1.0, 1e-15);
  const ComplexMatrix plus = ket_projector(basis_ket(2, 0) + basis_ket(2, 1));
  EXPECT_NEAR(trace_distance(identity(2) / 2.0, plus), 0.5, 1e-14);
}

TEST(TraceDistance, SymmetricAndChecksDims) {
  Rng rng(2);
  const auto a = testing::random_density_matrix(rng, 4, 2);
  const auto b = testing::random_density_matrix(rng, 4, 3);
  EXPECT_NEAR(trace_distance(a, b), trace_distance(b, a), 1e-14);
  EXPECT_THROW(trace_distance(identity(2), identity(3)), ContractViolation);
}

}  // namespace
}  // namespace qpool
