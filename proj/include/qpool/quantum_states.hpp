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

#include <cstdint>
#include <span>
#include <vector>

#include "qpool/matrix_core.hpp"
#include "qpool/random.hpp"

namespace qpool {

/// Hermitian, positive semidefinite, unit-trace operator. Construction
/// validates all three properties within 1e-10.
class DensityOperator {
 public:
  static constexpr double kTol = 1e-10;

  explicit DensityOperator(const ComplexMatrix& m);

  /// Hermitian part of g divided by its trace. Throws ContractViolation if
  /// the trace is not positive.
  static DensityOperator from_unnormalized(const ComplexMatrix& g);
  static DensityOperator from_ket(const ComplexVector& ket);
  static DensityOperator maximally_mixed(std::size_t dim);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double purity() const;

 private:
  ComplexMatrix m_;
};

/// Joint state of several subsystems. By convention the measured parties
/// come first and the target system S is the last entry of dims.
class MultipartiteState {
 public:
  MultipartiteState(DensityOperator density, Dims dims);

  const DensityOperator& density() const noexcept { return density_; }
  const ComplexMatrix& matrix() const noexcept { return density_.matrix(); }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t num_subsystems() const noexcept { return dims_.size(); }
  std::size_t num_parties() const noexcept { return dims_.size() - 1; }
  std::size_t system_dim() const noexcept { return dims_.back(); }

 private:
  DensityOperator density_;
  Dims dims_;
};

/// Isometry U with U^dagger U = I (within 1e-10); rows >= cols.
class Isometry {
 public:
  explicit Isometry(ComplexMatrix u);
  const ComplexMatrix& matrix() const noexcept { return u_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(u_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(u_.cols()); }

 private:
  ComplexMatrix u_;
};

DensityOperator reduced_state(const MultipartiteState& w,
                              const std::vector<std::size_t>& keep);

/// Reduced state of the last subsystem.
DensityOperator system_state(const MultipartiteState& w);

/// Pure state sum_k |k> (x) sqrt(rho) U |k>, with k running over the product
/// basis of the parties (row-major). Requires rank(rho) == prod(party_dims)
/// and U mapping into the support of rho.
MultipartiteState class_i_state(const DensityOperator& rho,
                                const Dims& party_dims, const Isometry& u);

inline MultipartiteState class_i_state(const DensityOperator& rho,
                                       std::size_t d_a, std::size_t d_b,
                                       const Isometry& u) {
  return class_i_state(rho, Dims{d_a, d_b}, u);
}

/// class_i_state with U = (support eigenvectors of rho) * (Haar unitary).
MultipartiteState class_i_state_haar(const DensityOperator& rho,
                                     const Dims& party_dims, std::uint64_t seed);

/// Mixture sum_s p(s) sigma_s (x) tau_s (x) ... (x) rho_s. party_states[i][s]
/// is party i's state in term s. The rho_s must be mutually orthogonal.
MultipartiteState class_ii_state(
    std::span<const double> weights,
    const std::vector<std::vector<DensityOperator>>& party_states,
    const std::vector<DensityOperator>& rhos);

inline MultipartiteState class_ii_state(std::span<const double> weights,
                                        const std::vector<DensityOperator>& sigmas,
                                        const std::vector<DensityOperator>& taus,
                                        const std::vector<DensityOperator>& rhos) {
  return class_ii_state(weights, {sigmas, taus}, rhos);
}

/// (|000> + |111>)/sqrt(2) on dims [2, 2, 2].
MultipartiteState ghz_state();

/// (|000> + |011> + |102> + |113>)/2 on dims [2, 2, 4].
MultipartiteState state_224();

/// Pure state whose S-rank equals the product of the party ranks. Needs at
/// least one party; `tol` bounds |Tr(W^2) - 1|.
bool check_class_i(const MultipartiteState& w, double tol = 1e-9);

/// Normalized complex Gaussian vector on prod(dims).
MultipartiteState haar_random_pure(const Dims& dims, std::uint64_t seed);

/// V diag(lambda) V^dagger with Haar V and lambda_k = floor + (1 - dim*floor) w_k,
/// w_k normalized squared Gaussians. Requires dim * floor < 1.
DensityOperator random_full_rank_density(Rng& rng, std::size_t dim,
                                         double floor = 0.01);

}  // namespace qpool
