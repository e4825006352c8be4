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

#include <gtest/gtest.h>

#include <array>

#include "qpool/errors.hpp"
#include "qpool/measurement.hpp"
#include "qpool/scenario.hpp"
#include "test_support.hpp"

namespace qpool {
namespace {

using testing::diag;
using testing::MatrixNear;

DensityOperator projector_state(std::initializer_list<double> amps) {
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (double a : amps) v(i++) = a;
  return DensityOperator::from_ket(v);
}

TEST(PoolTwo, Example224RecoversOverseer) {
  const auto w = state_224();
  const Povm pm = plus_minus_povm();
  const auto rho = system_state(w);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const auto r = pool_two(alice_update(w, pm, a).state, bob_update(w, pm, b).state, rho);
      EXPECT_TRUE(MatrixNear(r.pooled, overseer_update(w, pm, a, pm, b).state.matrix(), 1e-12));
      EXPECT_TRUE(r.is_density());
      EXPECT_FALSE(r.non_hermitian_warning);
    }
  const auto plus = pool_two(alice_update(w, pm, 0).state, bob_update(w, pm, 0).state, rho);
  EXPECT_TRUE(MatrixNear(plus.pooled, projector_state({0.5, 0.5, 0.5, 0.5}).matrix(), 1e-12));
}

TEST(PoolTwo, PriorTwiceIsPrior) {
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const DensityOperator rho(testing::random_density_matrix(rng, 4, 1 + t % 4));
    EXPECT_TRUE(MatrixNear(pool_two(rho, rho, rho).pooled, rho.matrix(), 1e-10));
  }
}

TEST(PoolTwo, UninformativePartner) {
  Rng rng(6);
  const auto rho = random_full_rank_density(rng, 3);
  const DensityOperator alpha(testing::random_density_matrix(rng, 3, 2));
  EXPECT_TRUE(MatrixNear(pool_two(alpha, rho, rho).pooled, alpha.matrix(), 1e-10));
  EXPECT_TRUE(MatrixNear(pool_two(rho, alpha, rho).pooled, alpha.matrix(), 1e-10));
}

TEST(PoolTwo, GhzPoolMissesOverseer) {
  const auto w = ghz_state();
  const Povm pm = plus_minus_povm();
  const auto r = pool_two(alice_update(w, pm, 0).state, bob_update(w, pm, 0).state, system_state(w));
  EXPECT_TRUE(MatrixNear(r.pooled, identity(2) / 2.0, 1e-14));
  EXPECT_NEAR(trace_distance(r.pooled, overseer_update(w, pm, 0, pm, 0).state.matrix()), 0.5,
              1e-12);
}

TEST(PoolTwo, DiagonalCaseIsClassicalPooling) {
  const auto rho = DensityOperator(diag({0.5, 0.3, 0.2}));
  const auto alpha = DensityOperator(diag({0.6, 0.3, 0.1}));
  const auto beta = DensityOperator(diag({0.2, 0.2, 0.6}));
  const std::array<ClassicalDistribution, 2> post{ClassicalDistribution({0.6, 0.3, 0.1}),
                                                  ClassicalDistribution({0.2, 0.2, 0.6})};
  const auto cl = classical_pool(ClassicalDistribution({0.5, 0.3, 0.2}), post);
  const auto q = pool_two(alpha, beta, rho);
  for (Eigen::Index i = 0; i < 3; ++i)
    EXPECT_NEAR(q.pooled(i, i).real(), cl[static_cast<std::size_t>(i)], 1e-14);
  EXPECT_NEAR(max_abs(q.pooled - q.pooled.diagonal().asDiagonal().toDenseMatrix()), 0.0, 0.0);
}

TEST(PoolTwo, Errors) {
  const auto rho = DensityOperator(diag({1, 0}));
  const auto outside = DensityOperator(diag({0, 1}));
  EXPECT_THROW(pool_two(outside, rho, rho), SupportError);
  EXPECT_THROW(pool_two(rho, outside, rho), SupportError);

  const auto mixed = DensityOperator::maximally_mixed(2);
  EXPECT_THROW(pool_two(rho, outside, mixed), EmptyPoolError);
  EXPECT_THROW(pool_two(mixed, mixed, DensityOperator::maximally_mixed(3)), ContractViolation);
}

TEST(PoolTwo, NonCommutingPureStatesGiveIndefiniteResult) {
  const auto r = pool_two(projector_state({1, 0}), projector_state({1, 1}),
                          DensityOperator::maximally_mixed(2));
  EXPECT_FALSE(r.is_density());
  EXPECT_LT(r.min_eigenvalue, -0.1);
  EXPECT_TRUE(r.non_hermitian_warning);
  EXPECT_GT(r.hermiticity_defect, kPoolHermiticityWarning);
  EXPECT_NEAR(r.pooled.trace().real(), 1.0, 1e-14);
  EXPECT_NEAR(hermiticity_defect(r.pooled), 0.0, 0.0);
  EXPECT_THROW(static_cast<void>(r.state()), NotPsdError);
}

TEST(PoolN, TwoPosteriorsMatchPoolTwo) {
  Rng rng(8);
  const auto rho = random_full_rank_density(rng, 3);
  const DensityOperator a(testing::random_density_matrix(rng, 3, 3));
  const DensityOperator b(testing::random_density_matrix(rng, 3, 3));
  const std::array<DensityOperator, 2> both{a, b};
  EXPECT_TRUE(MatrixNear(pool_n(both, rho).pooled, pool_two(a, b, rho).pooled, 0.0));
}

TEST(PoolN, AllPriorsGivePrior) {
  Rng rng(9);
  const auto rho = random_full_rank_density(rng, 4);
  const std::vector<DensityOperator> posts(5, rho);
  EXPECT_TRUE(MatrixNear(pool_n(posts, rho).pooled, rho.matrix(), 1e-10));
  EXPECT_THROW(pool_n(std::span<const DensityOperator>{}, rho), ContractViolation);
}

TEST(PoolN, ThreePartyClassIMatchesJointUpdate) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dims parties{2, 2, 2};
    const auto params = random_class_i_parameters(parties, seed);
    const auto w = class_i_state(params.rho, parties, params.u);
    std::vector<Povm> povms;
    for (std::size_t i = 0; i < 3; ++i) povms.push_back(random_povm(2, 2, derive_seed(seed, i)));
    const std::map<std::size_t, std::size_t> outcome{{0, 1}, {1, 0}, {2, 1}};
    std::vector<DensityOperator> posts;
    for (const auto& [party, k] : outcome)
      posts.push_back(update_on_outcomes(w, povms, {{party, k}}).state);
    const auto joint = update_on_outcomes(w, povms, outcome);
    const auto r = pool_n(posts, params.rho);
    EXPECT_LT(trace_distance(r.pooled, joint.state.matrix()), 1e-9) << "seed " << seed;
  }
}

TEST(PoolTwo, SymmetricInClassI) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = random_class_i_scenario({3, 2}, {3, 3}, seed);
    const auto rho = system_state(s.state);
    const auto a = alice_update(s.state, s.povms[0], 1).state;
    const auto b = bob_update(s.state, s.povms[1], 2).state;
    EXPECT_TRUE(MatrixNear(pool_two(a, b, rho).pooled, pool_two(b, a, rho).pooled, 1e-9));
  }
}

}  // namespace
}  // namespace qpool
