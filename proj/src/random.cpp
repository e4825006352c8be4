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

#include "qpool/random.hpp"

#include <cmath>
#include <numbers>

#include "qpool/errors.hpp"

namespace qpool {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64_mix(master + (index + 1) * kGolden);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64_mix(seed + kGolden)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_gaussian() {
  const double re = gaussian();
  const double im = gaussian();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

std::size_t Rng::uniform_int(std::size_t lo, std::size_t hi) {
  if (hi < lo) throw ContractViolation("uniform_int: empty range");
  const std::uint64_t span = hi - lo + 1;
  // Rejection sampling keeps the draw exactly uniform and portable.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return lo + static_cast<std::size_t>(x % span);
}

ComplexMatrix Rng::gaussian_matrix(std::size_t rows, std::size_t cols) {
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = complex_gaussian();
  return m;
}

ComplexMatrix haar_isometry(Rng& rng, std::size_t rows, std::size_t cols) {
  if (cols == 0 || rows < cols)
    throw ContractViolation("haar_isometry: need rows >= cols >= 1");
  const ComplexMatrix g = rng.gaussian_matrix(rows, cols);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const auto c = static_cast<Eigen::Index>(cols);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(g.rows(), c);
  const ComplexMatrix r = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < c; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag == 0.0) throw NumericError("haar_isometry: singular Gaussian draw");
    q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace qpool
