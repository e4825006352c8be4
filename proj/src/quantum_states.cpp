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

#include "qpool/quantum_states.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "qpool/errors.hpp"

namespace qpool {

DensityOperator::DensityOperator(const ComplexMatrix& m) {
  require_square(m, "DensityOperator");
  const double defect = hermiticity_defect(m);
  if (defect > kTol) {
    std::ostringstream os;
    os << "DensityOperator: not Hermitian (defect " << defect << ")";
    throw ContractViolation(os.str());
  }
  m_ = hermitian_part(m);
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kTol) {
    std::ostringstream os;
    os << "DensityOperator: trace " << tr << " != 1";
    throw ContractViolation(os.str());
  }
  const auto eig = herm_eig(m_);
  const double lmin = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (lmin < -kTol) {
    std::ostringstream os;
    os << "DensityOperator: negative eigenvalue " << lmin;
    throw NotPsdError(os.str());
  }
}

DensityOperator DensityOperator::from_unnormalized(const ComplexMatrix& g) {
  require_square(g, "DensityOperator::from_unnormalized");
  const ComplexMatrix h = hermitian_part(g);
  const double tr = h.trace().real();
  if (!(tr > 0.0))
    throw ContractViolation("DensityOperator::from_unnormalized: trace not positive");
  return DensityOperator(h / tr);
}

DensityOperator DensityOperator::from_ket(const ComplexVector& ket) {
  return DensityOperator(ket_projector(ket));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  return DensityOperator(identity(dim) / static_cast<double>(dim));
}

double DensityOperator::purity() const {
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return m_.squaredNorm();
}

MultipartiteState::MultipartiteState(DensityOperator density, Dims dims)
    : density_(std::move(density)), dims_(std::move(dims)) {
  if (dims_.empty())
    throw ContractViolation("MultipartiteState: at least one subsystem required");
  for (auto d : dims_)
    if (d == 0) throw ContractViolation("MultipartiteState: zero dimension");
  if (product(dims_) != density_.dim())
    throw ContractViolation("MultipartiteState: product of dims " +
                            std::to_string(product(dims_)) +
                            " != state dimension " + std::to_string(density_.dim()));
}

Isometry::Isometry(ComplexMatrix u) : u_(std::move(u)) {
  if (u_.cols() == 0 || u_.rows() < u_.cols() || !u_.allFinite())
    throw ContractViolation("Isometry: need a finite rows >= cols >= 1 matrix");
  const ComplexMatrix gram = u_.adjoint() * u_;
  const double dev = max_abs(gram - ComplexMatrix::Identity(u_.cols(), u_.cols()));
  if (dev > 1e-10) {
    std::ostringstream os;
    os << "Isometry: U^dagger U deviates from identity by " << dev;
    throw ContractViolation(os.str());
  }
}

DensityOperator reduced_state(const MultipartiteState& w,
                              const std::vector<std::size_t>& keep) {
  return DensityOperator(hermitian_part(partial_trace(w.matrix(), w.dims(), keep)));
}

DensityOperator system_state(const MultipartiteState& w) {
  return reduced_state(w, {w.num_subsystems() - 1});
}

MultipartiteState class_i_state(const DensityOperator& rho, const Dims& party_dims,
                                const Isometry& u) {
  if (party_dims.empty())
    throw ContractViolation("class_i_state: at least one party required");
  const std::size_t d_parties = product(party_dims);
  const std::size_t rank = rank_of(rho.matrix());
  if (rank != d_parties) {
    std::ostringstream os;
    os << "class_i_state: rank(rho) = " << rank << " but the parties span "
       << d_parties << " dimensions";
    throw RankConditionError(os.str());
  }
  if (u.cols() != d_parties || u.rows() != rho.dim())
    throw ContractViolation("class_i_state: U must be " + std::to_string(rho.dim()) +
                            "x" + std::to_string(d_parties));
  const ComplexMatrix& um = u.matrix();
  const ComplexMatrix p = support_projector(rho.matrix());
  if (max_abs(p * um - um) > 1e-9)
    throw ContractViolation("class_i_state: U does not map into supp(rho)");

  // Columns of sqrt(rho) U are the S-blocks of |Psi> for each |k>.
  const ComplexMatrix blocks = sqrt_psd(rho.matrix()) * um;
  const auto ds = static_cast<Eigen::Index>(rho.dim());
  ComplexVector psi(static_cast<Eigen::Index>(d_parties) * ds);
  for (Eigen::Index k = 0; k < blocks.cols(); ++k) psi.segment(k * ds, ds) = blocks.col(k);

  Dims dims = party_dims;
  dims.push_back(rho.dim());
  return MultipartiteState(DensityOperator::from_ket(psi), std::move(dims));
}

MultipartiteState class_i_state_haar(const DensityOperator& rho,
                                     const Dims& party_dims, std::uint64_t seed) {
  const std::size_t d_parties = product(party_dims);
  const auto eig = herm_eig(rho.matrix());
  const double cut = support_cutoff(std::max(eig.eigenvalues(0), 0.0), kDefaultRankTol);
  const auto rank = static_cast<std::size_t>((eig.eigenvalues.array() > cut).count());
  if (rank != d_parties)
    throw RankConditionError("class_i_state_haar: rank(rho) = " + std::to_string(rank) +
                             ", parties span " + std::to_string(d_parties));
  Rng rng(seed);
  const ComplexMatrix support_basis = eig.eigenvectors.leftCols(static_cast<Eigen::Index>(rank));
  return class_i_state(rho, party_dims,
                       Isometry(support_basis * haar_unitary(rng, rank)));
}

MultipartiteState class_ii_state(
    std::span<const double> weights,
    const std::vector<std::vector<DensityOperator>>& party_states,
    const std::vector<DensityOperator>& rhos) {
  const std::size_t n = weights.size();
  if (n == 0) throw ContractViolation("class_ii_state: no terms");
  if (party_states.empty())
    throw ContractViolation("class_ii_state: at least one party required");
  if (rhos.size() != n)
    throw ContractViolation("class_ii_state: rhos length differs from weights");
  for (const auto& list : party_states)
    if (list.size() != n)
      throw ContractViolation("class_ii_state: party state list length differs from weights");

  double total = 0.0;
  for (double p : weights) {
    if (!(p >= 0.0)) throw ContractViolation("class_ii_state: negative weight");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw ContractViolation("class_ii_state: weights sum to " + std::to_string(total));

  Dims dims;
  for (const auto& list : party_states) {
    dims.push_back(list.front().dim());
    for (const auto& st : list)
      if (st.dim() != dims.back())
        throw ContractViolation("class_ii_state: inconsistent party dimension");
  }
  dims.push_back(rhos.front().dim());
  for (const auto& r : rhos)
    if (r.dim() != dims.back())
      throw ContractViolation("class_ii_state: inconsistent system dimension");

  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = s + 1; t < n; ++t) {
      const double overlap = max_abs(rhos[s].matrix() * rhos[t].matrix());
      if (overlap > 1e-10) {
        std::ostringstream os;
        os << "class_ii_state: rho_" << s << " rho_" << t << " has max-abs " << overlap;
        throw OrthogonalityError(os.str());
      }
    }

  const auto total_dim = static_cast<Eigen::Index>(product(dims));
  ComplexMatrix w = ComplexMatrix::Zero(total_dim, total_dim);
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<ComplexMatrix> factors;
    for (const auto& list : party_states) factors.push_back(list[s].matrix());
    factors.push_back(rhos[s].matrix());
    w += weights[s] * tensor_all(factors);
  }
  return MultipartiteState(DensityOperator(w), std::move(dims));
}

MultipartiteState ghz_state() {
  ComplexVector psi = ComplexVector::Zero(8);
  psi(0) = 1.0;
  psi(7) = 1.0;
  return MultipartiteState(DensityOperator::from_ket(psi), {2, 2, 2});
}

MultipartiteState state_224() {
  // index = (a * 2 + b) * 4 + s
  ComplexVector psi = ComplexVector::Zero(16);
  psi((0 * 2 + 0) * 4 + 0) = 1.0;
  psi((0 * 2 + 1) * 4 + 1) = 1.0;
  psi((1 * 2 + 0) * 4 + 2) = 1.0;
  psi((1 * 2 + 1) * 4 + 3) = 1.0;
  return MultipartiteState(DensityOperator::from_ket(psi), {2, 2, 4});
}

bool check_class_i(const MultipartiteState& w, double tol) {
  if (w.num_subsystems() < 2) return false;
  if (std::abs(w.density().purity() - 1.0) > tol) return false;
  std::size_t party_rank = 1;
  for (std::size_t i = 0; i + 1 < w.num_subsystems(); ++i)
    party_rank *= rank_of(reduced_state(w, {i}).matrix());
  return rank_of(system_state(w).matrix()) == party_rank;
}

MultipartiteState haar_random_pure(const Dims& dims, std::uint64_t seed) {
  if (dims.empty()) throw ContractViolation("haar_random_pure: dims must be nonempty");
  Rng rng(seed);
  const ComplexMatrix g = rng.gaussian_matrix(product(dims), 1);
  return MultipartiteState(DensityOperator::from_ket(g.col(0)), dims);
}

DensityOperator random_full_rank_density(Rng& rng, std::size_t dim, double floor) {
  if (dim == 0 || !(floor >= 0.0) || static_cast<double>(dim) * floor >= 1.0)
    throw ContractViolation("random_full_rank_density: need dim * floor < 1");
  RealVector w(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double g = rng.gaussian();
    w(i) = g * g;
  }
  const double total = w.sum();
  if (!(total > 0.0)) throw NumericError("random_full_rank_density: degenerate draw");
  const RealVector lambda =
      (floor + (1.0 - static_cast<double>(dim) * floor) * (w / total).array()).matrix();
  const ComplexMatrix v = haar_unitary(rng, dim);
  return DensityOperator::from_unnormalized(v * lambda.asDiagonal() * v.adjoint());
}

}  // namespace qpool
