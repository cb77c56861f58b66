#pragma once

// Hermitian eigenvalue numerics for positivity verdicts.
//
// The eigensolver is the cyclic Jacobi method with complex rotations. Each
// rotation first removes the phase of the pivot a_pq with a diagonal unitary
// and then applies the real symmetric Jacobi rotation, so the accumulated
// transform stays unitary and small eigenvalues keep absolute accuracy of
// order eps * max|a_ij|.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace bidisk {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

struct Eigensystem {
  Eigen::VectorXd values;  // ascending
  CMatrix vectors;         // column k belongs to values[k]
  int sweeps = 0;
};

inline double max_abs_entry(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

inline CMatrix symmetrized(const CMatrix& h) { return 0.5 * (h + h.adjoint()); }

/// Full eigendecomposition of (H + H*)/2 by cyclic Jacobi sweeps, iterated
/// until the off-diagonal Frobenius norm is at most 1e-13 * max|H_ij|.
inline Eigensystem jacobi_eigen(const CMatrix& h, int max_sweeps = 100) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigenvalue problem needs a square matrix");
  const Eigen::Index n = h.rows();
  CMatrix a = symmetrized(h);
  CMatrix v = CMatrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = a(i, i).real();

  const double scale = max_abs_entry(a);
  const double target = 1e-13 * scale;
  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && scale > 0.0 && off_norm() > target; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const std::complex<double> apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const std::complex<double> phase = apq / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const std::complex<double> gpp = c, gpq = s;
        const std::complex<double> gqp = -s * std::conj(phase), gqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {  // A <- A G
          const auto akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // A <- G* A
          const auto apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // V <- V G
          const auto vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i).real() < a(j, j).real(); });

  Eigensystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.values[k] = a(src, src).real();
    out.vectors.col(k) = v.col(src).normalized();
  }
  return out;
}

struct EigenMin {
  double value = 0.0;
  CVector vector;
};

/// Smallest eigenvalue of (H + H*)/2 with a unit eigenvector.
inline EigenMin eigen_min(const CMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("eigenvalue problem needs a square matrix");
  if (h.rows() == 0) throw std::invalid_argument("eigenvalue problem needs a non-empty matrix");
  const Eigensystem es = jacobi_eigen(h);
  return {es.values[0], es.vectors.col(0)};
}

inline constexpr double kDefaultPsdTol = 1e-9;

struct PsdVerdict {
  double min_eigenvalue = 0.0;
  CVector witness;
  double scale = 0.0;
  double tol = kDefaultPsdTol;
  bool psd = true;

  /// min_eigenvalue >= -tol * max(1, scale)
  static bool decide(double min_eigenvalue, double tol, double scale) {
    return min_eigenvalue >= -tol * std::max(1.0, scale);
  }
};

inline PsdVerdict is_psd(const CMatrix& h, double tol = kDefaultPsdTol) {
  if (!(tol > 0.0)) throw std::invalid_argument("psd tolerance must be positive");
  const EigenMin em = eigen_min(h);
  PsdVerdict v;
  v.min_eigenvalue = em.value;
  v.witness = em.vector;
  v.scale = max_abs_entry(h);
  v.tol = tol;
  v.psd = PsdVerdict::decide(em.value, tol, v.scale);
  return v;
}

/// Entrywise (Schur) product.
inline CMatrix hadamard(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("hadamard: dimension mismatch");
  return a.cwiseProduct(b);
}

}  // namespace bidisk
