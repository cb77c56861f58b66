#pragma once

// Truncated operator algebra on the Hardy space of the bidisk.
//
// The truncated space H2_N is spanned by z1^a z2^b with 0 <= a, b <= N,
// ordered lexicographically by (a, b). H2_N is invariant under every T_f^*,
// so P_N T_f T_g^* P_N = (P_N T_f P_N)(P_N T_g P_N)^* and the compressions
// below are exact matrix entries of the full-space operators; only the
// Taylor coefficients of rational symbols are truncated.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bidisk/funcspace.hpp"
#include "bidisk/kernel.hpp"
#include "bidisk/psd.hpp"

namespace bidisk {

struct TruncatedSpace {
  int N = 0;

  Eigen::Index dim() const { return static_cast<Eigen::Index>((N + 1) * (N + 1)); }
  Eigen::Index index(int a, int b) const { return static_cast<Eigen::Index>(a * (N + 1) + b); }
};

/// Matrix of an operator on H2_N and how it was obtained.
struct TruncOp {
  int N = 0;
  CMatrix m;
  std::string recipe;
  int buffer = 0;
  double tail_bound = 0.0;

  TruncatedSpace space() const { return {N}; }
};

inline constexpr int kMaxTruncationDegree = 32;

namespace detail {

inline void check_degree(int N) {
  if (N < 0 || N > kMaxTruncationDegree)
    throw std::invalid_argument("truncation degree must lie in [0, " + std::to_string(kMaxTruncationDegree) + "]");
}

}  // namespace detail

/// Restriction of a matrix on H2_from to H2_to (to <= from).
inline CMatrix compress(const CMatrix& m, int from, int to) {
  const TruncatedSpace big{from}, small{to};
  CMatrix out(small.dim(), small.dim());
  for (int a = 0; a <= to; ++a)
    for (int b = 0; b <= to; ++b)
      for (int c = 0; c <= to; ++c)
        for (int d = 0; d <= to; ++d) out(small.index(a, b), small.index(c, d)) = m(big.index(a, b), big.index(c, d));
  return out;
}

/// Rows and columns of bidegree at most `m` in each variable.
inline CMatrix interior_block(const TruncOp& op, int m) {
  if (m < 0) return CMatrix(0, 0);
  return compress(op.m, op.N, std::min(m, op.N));
}

inline CVector to_vector(const Series& s) {
  CVector v(static_cast<Eigen::Index>(s.c.size()));
  for (std::size_t i = 0; i < s.c.size(); ++i) v[static_cast<Eigen::Index>(i)] = s.c[i];
  return v;
}

/// Evaluates the function whose H2_N coefficients are `v` at (z1, z2).
inline cplx eval_coefficients(const CVector& v, int N, cplx z1, cplx z2) {
  const TruncatedSpace sp{N};
  cplx acc = 0.0;
  for (int a = N; a >= 0; --a) {
    cplx row = 0.0;
    for (int b = N; b >= 0; --b) row = row * z2 + v[sp.index(a, b)];
    acc = acc * z1 + row;
  }
  return acc;
}

namespace detail {

inline CMatrix toeplitz_from_series(const Series& s) {
  const int N = s.degree;
  const TruncatedSpace sp{N};
  CMatrix t = CMatrix::Zero(sp.dim(), sp.dim());
  for (int a = 0; a <= N; ++a)
    for (int b = 0; b <= N; ++b)
      for (int c = a; c <= N; ++c)
        for (int d = b; d <= N; ++d) t(sp.index(c, d), sp.index(a, b)) = s.at(c - a, d - b);
  return t;
}

}  // namespace detail

/// P_N T_f P_N: entry (row z^{c,d}, column z^{a,b}) is the coefficient of
/// z^{c,d} in f z^{a,b}. With buffer > 0 the matrix is formed on H2_{N+buffer}
/// first and then compressed; the result is the same.
inline TruncOp toeplitz(const HoloFunc& f, int N, int buffer = 0) {
  detail::check_degree(N);
  if (buffer < 0) throw std::invalid_argument("buffer must be non-negative");
  const Series s = lower(f, N + buffer);
  TruncOp op;
  op.N = N;
  op.buffer = buffer;
  op.tail_bound = s.tail_bound;
  op.recipe = "toeplitz " + f.to_string();
  op.m = compress(detail::toeplitz_from_series(s), N + buffer, N);
  return op;
}

/// T_phi1 T_phi1^* + T_phi2 T_phi2^* - T_phi3 T_phi3^*, products formed on
/// H2_{N+buffer} before compression.
inline TruncOp defect_op(const Triplet& t, int N, int buffer = 0) {
  detail::check_degree(N);
  const int M = N + buffer;
  const Series s1 = lower(t.phi1, M), s2 = lower(t.phi2, M), s3 = lower(t.phi3, M);
  const CMatrix a = detail::toeplitz_from_series(s1);
  const CMatrix b = detail::toeplitz_from_series(s2);
  const CMatrix c = detail::toeplitz_from_series(s3);
  const CMatrix full = a * a.adjoint() + b * b.adjoint() - c * c.adjoint();
  TruncOp op;
  op.N = N;
  op.buffer = buffer;
  op.tail_bound = s1.tail_bound + s2.tail_bound + s3.tail_bound;
  op.recipe = "defect " + t.to_string();
  op.m = compress(symmetrized(full), M, N);
  return op;
}

/// max |eigenvalue|; a lower bound for the norm of the full-space operator.
inline double op_norm(const TruncOp& h) {
  const Eigensystem es = jacobi_eigen(h.m);
  if (es.values.size() == 0) return 0.0;
  return std::max(std::abs(es.values[0]), std::abs(es.values[es.values.size() - 1]));
}

// ---------------------------------------------------------------------------
// Submodules q1 H2 + q2 H2 for finite Blaschke products q1(z1), q2(z2).

struct SubmoduleSpec {
  std::vector<DiskPoint> zeros1;
  std::vector<DiskPoint> zeros2;
  cplx unit1 = 1.0;
  cplx unit2 = 1.0;

  int degree1() const { return static_cast<int>(zeros1.size()); }
  int degree2() const { return static_cast<int>(zeros2.size()); }

  /// q_j as a function on the bidisk.
  HoloFunc q(int j) const {
    const auto& zs = j == 1 ? zeros1 : zeros2;
    HoloFunc f = HoloFunc::constant(j == 1 ? unit1 : unit2);
    for (const auto& a : zs) f = f * HoloFunc::blaschke(a, j);
    return f;
  }

  /// |q_j| = 1 on a grid of the unit circle to 1e-12; throws otherwise.
  void validate(int grid = 256) const {
    for (cplx u : {unit1, unit2})
      if (std::abs(std::abs(u) - 1.0) > 1e-12) throw std::invalid_argument("submodule generator constant must be unimodular");
    for (int j : {1, 2}) {
      const HoloFunc f = q(j);
      for (int k = 0; k < grid; ++k) {
        const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * k / grid);
        const cplx val = j == 1 ? f(u, 0.0) : f(0.0, u);
        if (std::abs(std::abs(val) - 1.0) > 1e-12) throw std::invalid_argument("generator is not inner on the circle");
      }
    }
  }
};

namespace detail {

using Coeffs = std::vector<cplx>;

inline Coeffs mul1(const Coeffs& f, const Coeffs& g) {
  Coeffs out(f.size(), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; i + j < f.size(); ++j) out[i + j] += f[i] * g[j];
  return out;
}

inline Coeffs blaschke1(cplx a, int N) {
  Coeffs c(static_cast<std::size_t>(N + 1), 0.0);
  c[0] = -a;
  cplx coef = 1.0 - std::norm(a);
  for (int k = 1; k <= N; ++k) {
    c[static_cast<std::size_t>(k)] = coef;
    coef *= std::conj(a);
  }
  return c;
}

inline Coeffs blaschke_product1(const std::vector<DiskPoint>& zeros, cplx unit, int N) {
  Coeffs c(static_cast<std::size_t>(N + 1), 0.0);
  c[0] = unit;
  for (const auto& a : zeros) c = mul1(c, blaschke1(a.value(), N));
  return c;
}

/// Orthonormal basis of H2(D) minus q H2(D) for q with the given zeros:
/// e_k = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} b_{a_j}(z).
inline std::vector<Coeffs> model_space_basis(const std::vector<DiskPoint>& zeros, int N) {
  std::vector<Coeffs> basis;
  Coeffs prefix(static_cast<std::size_t>(N + 1), 0.0);
  prefix[0] = 1.0;
  for (const auto& z : zeros) {
    const cplx a = z.value();
    Coeffs kernel(static_cast<std::size_t>(N + 1));
    cplx p = std::sqrt(1.0 - std::norm(a));
    for (int n = 0; n <= N; ++n) {
      kernel[static_cast<std::size_t>(n)] = p;
      p *= std::conj(a);
    }
    basis.push_back(mul1(prefix, kernel));
    prefix = mul1(prefix, blaschke1(a, N));
  }
  return basis;
}

inline CVector tensor(const Coeffs& f, const Coeffs& g, int N) {
  const TruncatedSpace sp{N};
  CVector v(sp.dim());
  for (int a = 0; a <= N; ++a)
    for (int b = 0; b <= N; ++b) v[sp.index(a, b)] = f[static_cast<std::size_t>(a)] * g[static_cast<std::size_t>(b)];
  return v;
}

inline double blaschke_tail(const std::vector<DiskPoint>& zeros, int N) {
  double t = 0.0;
  for (const auto& a : zeros) {
    const double r = a.modulus();
    if (r > 0.0) t += std::pow(r, N + 1) / (1.0 - r);
  }
  return t;
}

}  // namespace detail

/// Compression of the orthogonal projection onto q1 H2 + q2 H2. The
/// complement is K1 (x) K2 with K_j the model space of q_j; its orthonormal
/// basis is explicit, so P = I - sum_{k,l} (e_k (x) f_l)(e_k (x) f_l)^*.
inline TruncOp proj_submodule(const SubmoduleSpec& s, int N) {
  detail::check_degree(N);
  const TruncatedSpace sp{N};
  const auto e = detail::model_space_basis(s.zeros1, N);
  const auto f = detail::model_space_basis(s.zeros2, N);
  CMatrix p = CMatrix::Identity(sp.dim(), sp.dim());
  for (const auto& ek : e)
    for (const auto& fl : f) {
      const CVector v = detail::tensor(ek, fl, N);
      p -= v * v.adjoint();
    }
  TruncOp op;
  op.N = N;
  op.m = p;
  op.recipe = "projection onto q1 H2 + q2 H2";
  op.tail_bound = detail::blaschke_tail(s.zeros1, N) + detail::blaschke_tail(s.zeros2, N);
  return op;
}

/// P - T_{z1} P T_{z1}^* - T_{z2} P T_{z2}^* + T_{z1 z2} P T_{z1 z2}^* with
/// compressed shifts, i.e. index shifts of P.
inline TruncOp core_op(const TruncOp& p) {
  const int N = p.N;
  const TruncatedSpace sp{N};
  CMatrix out = p.m;
  for (int c = 0; c <= N; ++c)
    for (int d = 0; d <= N; ++d)
      for (int a = 0; a <= N; ++a)
        for (int b = 0; b <= N; ++b) {
          cplx v = 0.0;
          if (c >= 1 && a >= 1) v -= p.m(sp.index(c - 1, d), sp.index(a - 1, b));
          if (d >= 1 && b >= 1) v -= p.m(sp.index(c, d - 1), sp.index(a, b - 1));
          if (c >= 1 && a >= 1 && d >= 1 && b >= 1) v += p.m(sp.index(c - 1, d - 1), sp.index(a - 1, b - 1));
          out(sp.index(c, d), sp.index(a, b)) += v;
        }
  TruncOp op;
  op.N = N;
  op.m = out;
  op.recipe = "core of (" + p.recipe + ")";
  op.tail_bound = p.tail_bound;
  return op;
}

/// sum_k sign_k v_k v_k^*.
inline TruncOp rankk_core(const std::vector<CVector>& vectors, const std::vector<int>& signs, int N) {
  if (vectors.size() != signs.size()) throw std::invalid_argument("rankk_core: one sign per vector");
  const TruncatedSpace sp{N};
  CMatrix m = CMatrix::Zero(sp.dim(), sp.dim());
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != sp.dim()) throw std::invalid_argument("rankk_core: vector dimension mismatch");
    if (signs[k] != 1 && signs[k] != -1) throw std::invalid_argument("rankk_core: signs must be +1 or -1");
    m += static_cast<double>(signs[k]) * (vectors[k] * vectors[k].adjoint());
  }
  TruncOp op;
  op.N = N;
  op.m = m;
  op.recipe = "rank-" + std::to_string(vectors.size()) + " Schatten sum";
  return op;
}

/// q1 (x) q1 + q2 (x) q2 - (q1 q2) (x) (q1 q2) on H2_N.
inline TruncOp rank3_core(const SubmoduleSpec& s, int N) {
  detail::check_degree(N);
  const auto q1 = detail::blaschke_product1(s.zeros1, s.unit1, N);
  const auto q2 = detail::blaschke_product1(s.zeros2, s.unit2, N);
  detail::Coeffs one(static_cast<std::size_t>(N + 1), 0.0);
  one[0] = 1.0;
  TruncOp op = rankk_core({detail::tensor(q1, one, N), detail::tensor(one, q2, N), detail::tensor(q1, q2, N)}, {1, 1, -1}, N);
  op.recipe = "q1 (x) q1 + q2 (x) q2 - q1q2 (x) q1q2";
  op.tail_bound = detail::blaschke_tail(s.zeros1, N) + detail::blaschke_tail(s.zeros2, N);
  return op;
}

/// Coefficients conj(l1)^a conj(l2)^b of the Szegő kernel at lambda.
inline CVector kernel_vector(const BidiskPoint& lambda, int N) {
  detail::check_degree(N);
  const TruncatedSpace sp{N};
  CVector v(sp.dim());
  cplx pa = 1.0;
  for (int a = 0; a <= N; ++a) {
    cplx pb = 1.0;
    for (int b = 0; b <= N; ++b) {
      v[sp.index(a, b)] = pa * pb;
      pb *= std::conj(lambda.c2());
    }
    pa *= std::conj(lambda.c1());
  }
  return v;
}

/// Squared H2 norm of the kernel's tail beyond H2_N.
inline double kernel_tail_sq(const BidiskPoint& lambda, int N) {
  const double r1 = std::norm(lambda.c1()), r2 = std::norm(lambda.c2());
  const double s1 = (1.0 - std::pow(r1, N + 1)) / (1.0 - r1);
  const double s2 = (1.0 - std::pow(r2, N + 1)) / (1.0 - r2);
  return 1.0 / ((1.0 - r1) * (1.0 - r2)) - s1 * s2;
}

inline constexpr double kKernelIdentityRadius = 0.5;

/// max over z in `samples` of |k_lambda(z) (Delta_M k_lambda)(z) - (P_M k_lambda)(z)|
/// with k_lambda truncated to H2_N on both sides.
inline double kernel_identity_check(const SubmoduleSpec& s, const BidiskPoint& lambda, int N, const std::vector<BidiskPoint>& samples) {
  auto inside = [](const BidiskPoint& p) {
    return p.z1.modulus() <= kKernelIdentityRadius + 1e-12 && p.z2.modulus() <= kKernelIdentityRadius + 1e-12;
  };
  if (!inside(lambda)) throw std::invalid_argument("kernel_identity_check: lambda must satisfy |lambda_j| <= 0.5");
  for (const auto& z : samples)
    if (!inside(z)) throw std::invalid_argument("kernel_identity_check: sample points must satisfy |z_j| <= 0.5");

  const TruncOp p = proj_submodule(s, N);
  const TruncOp delta = core_op(p);
  const CVector k = kernel_vector(lambda, N);
  const CVector dk = delta.m * k;
  const CVector pk = p.m * k;
  double worst = 0.0;
  for (const auto& z : samples) {
    const cplx lhs = szego(lambda, z) * eval_coefficients(dk, N, z.c1(), z.c2());
    const cplx rhs = eval_coefficients(pk, N, z.c1(), z.c2());
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Text export:
//   line 1: "bidisk-matrix 1"
//   line 2: "<rows> <cols>"
//   then one line per row, entries "re,im" separated by single spaces.

inline void write_matrix(std::ostream& os, const CMatrix& m) {
  os << "bidisk-matrix 1\n" << m.rows() << ' ' << m.cols() << '\n';
  os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      os << m(i, j).real() << ',' << m(i, j).imag();
    }
    os << '\n';
  }
}

inline CMatrix read_matrix(std::istream& is) {
  std::string tag;
  int version = 0;
  Eigen::Index rows = 0, cols = 0;
  if (!(is >> tag >> version) || tag != "bidisk-matrix" || version != 1) throw std::invalid_argument("not a bidisk matrix file");
  if (!(is >> rows >> cols) || rows < 0 || cols < 0) throw std::invalid_argument("bad matrix dimensions");
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      std::string cell;
      if (!(is >> cell)) throw std::invalid_argument("matrix file truncated");
      const auto comma = cell.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("matrix entry must be re,im");
      m(i, j) = cplx(std::stod(cell.substr(0, comma)), std::stod(cell.substr(comma + 1)));
    }
  return m;
}

}  // namespace bidisk
