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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qpool/errors.hpp"

namespace qpool {

namespace {

std::string describe_dims(const Dims& dims) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << ']';
  return os.str();
}

// Checks PSD-ness of an already computed spectrum and returns lambda_max.
double require_psd_spectrum(const RealVector& eigenvalues, double tol,
                            std::string_view what) {
  const double lmax = eigenvalues.size() ? eigenvalues(0) : 0.0;
  const double lmin = eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1) : 0.0;
  const double slack = tol * std::max(1.0, std::abs(lmax));
  if (lmin < -slack) {
    std::ostringstream os;
    os << what << ": eigenvalue " << lmin << " below -" << slack;
    throw NotPsdError(os.str());
  }
  return std::max(lmax, 0.0);
}

// One two-sided Jacobi rotation zeroing a(p, q). Uses the unitary
// G = [[c, s e^{i phi}], [-s e^{-i phi}, c]] where a(p, q) = |a_pq| e^{i phi}.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex g_pp = c;
  const Complex g_pq = s * phase;
  const Complex g_qp = -s * std::conj(phase);
  const Complex g_qq = c;

  // a <- a G
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * g_pp + akq * g_qp;
    a(k, q) = akp * g_pq + akq * g_qq;
  }
  // a <- G^dagger a
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
    a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (Eigen::Index k = 0; k < v.rows(); ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * g_pp + vkq * g_qp;
    v(k, q) = vkp * g_pq + vkq * g_qq;
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

}  // namespace

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                 static_cast<Eigen::Index>(dim));
}

ComplexMatrix ket_projector(const ComplexVector& v) {
  const double n2 = v.squaredNorm();
  if (!(n2 > 0.0)) throw ContractViolation("ket_projector: zero vector");
  return v * v.adjoint() / n2;
}

ComplexVector basis_ket(std::size_t dim, std::size_t index) {
  if (index >= dim) throw ContractViolation("basis_ket: index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

double hermiticity_defect(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return (m + m.adjoint()) / 2.0;
}

void require_square(const ComplexMatrix& m, std::string_view what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw ContractViolation(os.str());
  }
  if (!m.allFinite())
    throw ContractViolation(std::string(what) + ": non-finite entry");
}

void require_hermitian(const ComplexMatrix& m, std::string_view what) {
  require_square(m, what);
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol * std::max(1.0, max_abs(m))) {
    std::ostringstream os;
    os << what << ": not Hermitian (max |h - h^dagger| = " << defect << ")";
    throw ContractViolation(os.str());
  }
}

std::size_t product(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                         std::multiplies<>());
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix tensor_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const auto& f : factors) out = tensor(out, f);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims,
                            std::vector<std::size_t> keep) {
  require_square(m, "partial_trace");
  if (dims.empty() || std::find(dims.begin(), dims.end(), 0u) != dims.end())
    throw ContractViolation("partial_trace: dims must be positive");
  if (product(dims) != static_cast<std::size_t>(m.rows()))
    throw ContractViolation("partial_trace: dims " + describe_dims(dims) +
                            " do not match matrix dimension " +
                            std::to_string(m.rows()));
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty())
    throw ContractViolation("partial_trace: keep set must be nonempty");
  if (keep.back() >= dims.size())
    throw ContractViolation("partial_trace: subsystem index out of range");

  const std::size_t n = dims.size();
  std::vector<std::size_t> stride(n);
  std::size_t s = 1;
  for (std::size_t i = n; i-- > 0;) {
    stride[i] = s;
    s *= dims[i];
  }
  std::vector<bool> kept(n, false);
  for (auto k : keep) kept[k] = true;

  // Offsets into the full index contributed by each kept / traced
  // multi-index, enumerated in row-major order of the respective subsystems.
  auto offsets = [&](bool want_kept) {
    std::vector<std::size_t> offs{0};
    for (std::size_t i = 0; i < n; ++i) {
      if (kept[i] != want_kept) continue;
      std::vector<std::size_t> next;
      next.reserve(offs.size() * dims[i]);
      for (auto o : offs)
        for (std::size_t d = 0; d < dims[i]; ++d) next.push_back(o + d * stride[i]);
      offs = std::move(next);
    }
    return offs;
  };
  const auto kept_offsets = offsets(true);
  const auto traced_offsets = offsets(false);

  const auto dk = static_cast<Eigen::Index>(kept_offsets.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r) {
    for (Eigen::Index c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (auto t : traced_offsets)
        acc += m(static_cast<Eigen::Index>(kept_offsets[r] + t),
                 static_cast<Eigen::Index>(kept_offsets[c] + t));
      out(r, c) = acc;
    }
  }
  return out;
}

EigenDecomposition herm_eig(const ComplexMatrix& h) {
  require_hermitian(h, "herm_eig");
  const Eigen::Index n = h.rows();
  ComplexMatrix a = hermitian_part(h);
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double scale = a.norm();
  int sweep = 0;
  if (scale > 0.0) {
    while (off_diagonal_norm(a) > kJacobiOffDiagTol * scale) {
      if (sweep == kJacobiMaxSweeps)
        throw NumericError("herm_eig: no convergence after " +
                           std::to_string(kJacobiMaxSweeps) + " sweeps");
      for (Eigen::Index p = 0; p < n - 1; ++p)
        for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
      ++sweep;
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return a(x, x).real() > a(y, y).real();
  });

  EigenDecomposition out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    ComplexVector col = v.col(src);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mag = std::abs(col(i));
      if (mag > 1e-12) {
        col *= std::conj(col(i)) / mag;
        col(i) = mag;
        break;
      }
    }
    out.eigenvectors.col(k) = col;
  }
  return out;
}

double support_cutoff(double lambda_max, double tol) {
  return lambda_max > kAbsoluteZero ? tol * lambda_max : kAbsoluteZero;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& h, double tol) {
  const auto eig = herm_eig(h);
  require_psd_spectrum(eig.eigenvalues, tol, "sqrt_psd");
  return spectral_map(eig, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

ComplexMatrix pinv_on_support(const ComplexMatrix& h, double tol) {
  const auto eig = herm_eig(h);
  const double lmax = require_psd_spectrum(eig.eigenvalues, tol, "pinv_on_support");
  const double cut = support_cutoff(lmax, tol);
  return spectral_map(eig, [cut](double x) { return x > cut ? 1.0 / x : 0.0; });
}

ComplexMatrix support_projector(const ComplexMatrix& h, double tol) {
  const auto eig = herm_eig(h);
  const double lmax = require_psd_spectrum(eig.eigenvalues, tol, "support_projector");
  const double cut = support_cutoff(lmax, tol);
  return spectral_map(eig, [cut](double x) { return x > cut ? 1.0 : 0.0; });
}

std::size_t rank_of(const ComplexMatrix& h, double tol) {
  const auto eig = herm_eig(h);
  const double lmax = require_psd_spectrum(eig.eigenvalues, tol, "rank_of");
  const double cut = support_cutoff(lmax, tol);
  return static_cast<std::size_t>((eig.eigenvalues.array() > cut).count());
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "trace_distance");
  require_square(b, "trace_distance");
  if (a.rows() != b.rows())
    throw ContractViolation("trace_distance: dimension mismatch");
  const auto eig = herm_eig(a - b);
  return 0.5 * eig.eigenvalues.cwiseAbs().sum();
}

}  // namespace qpool
