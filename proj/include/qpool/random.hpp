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

// Seeded random sources. Every random construction in the library takes an
// explicit 64-bit seed and owns its generator; there is no shared state.

#include <cstdint>
#include <random>

#include "qpool/matrix_core.hpp"

namespace qpool {

/// One step of the splitmix64 output function.
std::uint64_t splitmix64_mix(std::uint64_t z);

/// Seed for trial `index` of a sweep with master seed `master`: the
/// (index + 1)-th output of a splitmix64 stream started at `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller.
  double gaussian();
  /// Complex Gaussian with independent N(0, 1/2) real and imaginary parts.
  Complex complex_gaussian();
  /// Uniform integer in [lo, hi].
  std::size_t uniform_int(std::size_t lo, std::size_t hi);

  ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-distributed rows x cols isometry (rows >= cols): QR of a complex
/// Gaussian matrix with the phases of R's diagonal absorbed into Q.
ComplexMatrix haar_isometry(Rng& rng, std::size_t rows, std::size_t cols);

inline ComplexMatrix haar_unitary(Rng& rng, std::size_t dim) {
  return haar_isometry(rng, dim, dim);
}

}  // namespace qpool
