#pragma once

// Holomorphic functions on the bidisk as immutable expression trees.
//
// A HoloFunc is built from constants, the coordinates z1 and z2, Blaschke
// factors b_w(z_j), sums, products, scalar multiples and composition with a
// pair of functions. Trees are shared and never mutated, so copies are cheap
// and evaluation is thread-safe.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bidisk/mobius.hpp"

namespace bidisk {

/// Degree bound per variable; kUnbounded marks rational (Blaschke) dependence.
struct Bidegree {
  static constexpr int kUnbounded = std::numeric_limits<int>::max() / 4;
  int d1 = 0;
  int d2 = 0;

  bool finite() const { return d1 < kUnbounded && d2 < kUnbounded; }

  static int add(int a, int b) { return std::min(kUnbounded, a + b); }
  static int mul(int a, int b) {
    if (a == 0 || b == 0) return 0;
    if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
    return static_cast<int>(std::min<long long>(kUnbounded, static_cast<long long>(a) * b));
  }
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

class HoloFunc;

namespace detail {
inline std::string format_real(double x) {
  if (x == 0.0) return "0";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}
}  // namespace detail

/// Shortest round-trip text of a complex constant in the function grammar.
inline std::string format_constant(cplx c) {
  const std::string re = detail::format_real(c.real());
  if (c.imag() == 0.0) return c.real() < 0 ? "(" + re + ")" : re;
  const std::string im = detail::format_real(std::abs(c.imag()));
  const char* sign = std::signbit(c.imag()) ? "-" : "+";
  if (c.real() == 0.0) return std::string("(") + (std::signbit(c.imag()) ? "-" : "") + im + "i)";
  return "(" + re + sign + im + "i)";
}

class HoloFunc {
 public:
  enum class Kind { Constant, Coord, Blaschke, Sum, Product, Scale, Compose };

  HoloFunc() : HoloFunc(constant(0.0)) {}

  static HoloFunc constant(cplx c) {
    Node n;
    n.kind = Kind::Constant;
    n.value = c;
    return HoloFunc(std::move(n));
  }

  static HoloFunc coord(int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("coordinate index must be 1 or 2");
    Node n;
    n.kind = Kind::Coord;
    n.coord = j;
    n.degree = j == 1 ? Bidegree{1, 0} : Bidegree{0, 1};
    return HoloFunc(std::move(n));
  }

  static HoloFunc z1() { return coord(1); }
  static HoloFunc z2() { return coord(2); }

  /// b_w(z_j). A zero center reduces to the coordinate itself.
  static HoloFunc blaschke(DiskPoint w, int j) {
    if (j != 1 && j != 2) throw std::invalid_argument("coordinate index must be 1 or 2");
    Node n;
    n.kind = Kind::Blaschke;
    n.value = w.value();
    n.coord = j;
    n.degree = j == 1 ? Bidegree{Bidegree::kUnbounded, 0} : Bidegree{0, Bidegree::kUnbounded};
    return HoloFunc(std::move(n));
  }

  static HoloFunc scale(cplx c, const HoloFunc& f) {
    if (f.kind() == Kind::Constant) return constant(c * f.value());
    if (f.kind() == Kind::Scale) return scale(c * f.value(), f.child(0));
    Node n;
    n.kind = Kind::Scale;
    n.value = c;
    n.children = {f};
    n.degree = f.bidegree();
    return HoloFunc(std::move(n));
  }

  /// f(g1, g2).
  static HoloFunc compose(const HoloFunc& f, const HoloFunc& g1, const HoloFunc& g2) {
    if (f.kind() == Kind::Constant) return f;
    Node n;
    n.kind = Kind::Compose;
    n.children = {f, g1, g2};
    const Bidegree df = f.bidegree(), a = g1.bidegree(), b = g2.bidegree();
    n.degree = {Bidegree::add(Bidegree::mul(df.d1, a.d1), Bidegree::mul(df.d2, b.d1)),
                Bidegree::add(Bidegree::mul(df.d1, a.d2), Bidegree::mul(df.d2, b.d2))};
    return HoloFunc(std::move(n));
  }

  friend HoloFunc operator+(const HoloFunc& f, const HoloFunc& g) {
    if (f.kind() == Kind::Constant && g.kind() == Kind::Constant) return constant(f.value() + g.value());
    Node n;
    n.kind = Kind::Sum;
    n.children = {f, g};
    n.degree = {std::max(f.bidegree().d1, g.bidegree().d1), std::max(f.bidegree().d2, g.bidegree().d2)};
    return HoloFunc(std::move(n));
  }

  friend HoloFunc operator*(const HoloFunc& f, const HoloFunc& g) {
    if (f.kind() == Kind::Constant) return scale(f.value(), g);
    if (g.kind() == Kind::Constant) return scale(g.value(), f);
    Node n;
    n.kind = Kind::Product;
    n.children = {f, g};
    n.degree = {Bidegree::add(f.bidegree().d1, g.bidegree().d1), Bidegree::add(f.bidegree().d2, g.bidegree().d2)};
    return HoloFunc(std::move(n));
  }

  friend HoloFunc operator*(cplx c, const HoloFunc& f) { return scale(c, f); }
  friend HoloFunc operator-(const HoloFunc& f) { return scale(-1.0, f); }
  friend HoloFunc operator-(const HoloFunc& f, const HoloFunc& g) { return f + scale(-1.0, g); }

  Kind kind() const { return node_->kind; }
  /// Constant value, scale factor or Blaschke center, depending on kind.
  cplx value() const { return node_->value; }
  int coord_index() const { return node_->coord; }
  const HoloFunc& child(std::size_t i) const { return node_->children.at(i); }
  std::size_t arity() const { return node_->children.size(); }
  Bidegree bidegree() const { return node_->degree; }

  cplx operator()(cplx z1, cplx z2) const { return eval_raw(z1, z2); }
  cplx operator()(const BidiskPoint& z) const { return eval_raw(z.c1(), z.c2()); }

  /// Text in the function grammar; parses back to an equal tree.
  std::string to_string() const {
    switch (kind()) {
      case Kind::Constant: return format_constant(value());
      case Kind::Coord: return coord_index() == 1 ? "z1" : "z2";
      case Kind::Blaschke:
        return "blaschke(" + format_constant(value()) + ", z" + std::to_string(coord_index()) + ")";
      case Kind::Sum: return "(" + child(0).to_string() + " + " + child(1).to_string() + ")";
      case Kind::Product: return child(0).to_string() + "*" + grouped(child(1));
      case Kind::Scale: return format_constant(value()) + "*" + grouped(child(0));
      case Kind::Compose:
        return "compose(" + child(0).to_string() + ", (" + child(1).to_string() + ", " + child(2).to_string() + "))";
    }
    return {};
  }

  bool structurally_equal(const HoloFunc& other) const {
    if (node_ == other.node_) return true;
    if (kind() != other.kind() || value() != other.value() || coord_index() != other.coord_index() ||
        arity() != other.arity())
      return false;
    for (std::size_t i = 0; i < arity(); ++i)
      if (!child(i).structurally_equal(other.child(i))) return false;
    return true;
  }

 private:
  struct Node {
    Kind kind = Kind::Constant;
    cplx value{};
    int coord = 0;
    std::vector<HoloFunc> children;
    Bidegree degree{};
  };

  explicit HoloFunc(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

  // Parenthesizes right operands of '*' so that printing preserves the tree.
  static std::string grouped(const HoloFunc& f) {
    const bool chain = f.kind() == Kind::Product || f.kind() == Kind::Scale;
    return chain ? "(" + f.to_string() + ")" : f.to_string();
  }

  cplx eval_raw(cplx z1, cplx z2) const {
    switch (kind()) {
      case Kind::Constant: return value();
      case Kind::Coord: return coord_index() == 1 ? z1 : z2;
      case Kind::Blaschke: return blaschke_eval(value(), coord_index() == 1 ? z1 : z2);
      case Kind::Sum: return child(0).eval_raw(z1, z2) + child(1).eval_raw(z1, z2);
      case Kind::Product: return child(0).eval_raw(z1, z2) * child(1).eval_raw(z1, z2);
      case Kind::Scale: return value() * child(0).eval_raw(z1, z2);
      case Kind::Compose: {
        const cplx u1 = child(1).eval_raw(z1, z2);
        const cplx u2 = child(2).eval_raw(z1, z2);
        return child(0).eval_raw(u1, u2);
      }
    }
    return {};
  }

  std::shared_ptr<const Node> node_;
};

inline cplx eval(const HoloFunc& f, const BidiskPoint& z) { return f(z); }

// ---------------------------------------------------------------------------
// Sup-norm certification.

/// Slack for rounding in convex weights t + (1 - t) and unimodular constants.
inline constexpr double kCertifySlack = 1e-14;

/// Upper bound on sup |f| over the bidisk from the closure rules: coordinates
/// and Blaschke factors have bound 1, sums add, products and scalar multiples
/// multiply, and composition with a pair of bound-1 functions keeps the
/// outer bound. Returns +inf when a composition leaves the bidisk.
inline double sup_bound(const HoloFunc& f) {
  using K = HoloFunc::Kind;
  switch (f.kind()) {
    case K::Constant: return std::abs(f.value());
    case K::Coord:
    case K::Blaschke: return 1.0;
    case K::Sum: return sup_bound(f.child(0)) + sup_bound(f.child(1));
    case K::Product: return sup_bound(f.child(0)) * sup_bound(f.child(1));
    case K::Scale: return std::abs(f.value()) * sup_bound(f.child(0));
    case K::Compose: {
      const bool inside = sup_bound(f.child(1)) <= 1.0 + kCertifySlack && sup_bound(f.child(2)) <= 1.0 + kCertifySlack;
      return inside ? sup_bound(f.child(0)) : std::numeric_limits<double>::infinity();
    }
  }
  return std::numeric_limits<double>::infinity();
}

class CertificationError : public std::invalid_argument {
 public:
  CertificationError(const std::string& what, std::string offending)
      : std::invalid_argument(what), offending_(std::move(offending)) {}
  const std::string& offending_node() const { return offending_; }

 private:
  std::string offending_;
};

namespace detail {
// Descends from a node whose bound exceeds 1 into the first child that also
// exceeds 1; the last node reached is where the closure rules broke.
inline HoloFunc offending_node(const HoloFunc& f) {
  HoloFunc cur = f;
  for (;;) {
    std::optional<HoloFunc> next;
    if (cur.kind() == HoloFunc::Kind::Compose) {
      for (std::size_t i = 1; i < 3 && !next; ++i)
        if (sup_bound(cur.child(i)) > 1.0 + kCertifySlack) next = cur.child(i);
      if (!next && sup_bound(cur.child(0)) > 1.0 + kCertifySlack) next = cur.child(0);
    } else {
      for (std::size_t i = 0; i < cur.arity() && !next; ++i)
        if (sup_bound(cur.child(i)) > 1.0 + kCertifySlack) next = cur.child(i);
    }
    if (!next) return cur;
    cur = *next;
  }
}
}  // namespace detail

/// Largest |f| on the G x G uniform grid of the torus |z1| = |z2| = 1.
/// A lower bound for the sup norm, never a certificate.
inline double sup_norm_estimate(const HoloFunc& f, int grid = 256) {
  if (grid < 8) throw std::invalid_argument("sup_norm_estimate needs a grid of at least 8");
  double best = 0.0;
  const double step = 2.0 * std::numbers::pi / grid;
  for (int a = 0; a < grid; ++a) {
    const cplx u1 = std::polar(1.0, a * step);
    for (int b = 0; b < grid; ++b) best = std::max(best, std::abs(f(u1, std::polar(1.0, b * step))));
  }
  return best;
}

/// A holomorphic self-map (psi1, psi2) of the bidisk with a record of how
/// the bound |psi_j| <= 1 was established.
class SelfMap {
 public:
  enum class Evidence { ByConstruction, GridEstimate };

  /// Admits the pair only when both coordinates satisfy the closure rules.
  static SelfMap certify(HoloFunc psi1, HoloFunc psi2) {
    for (const HoloFunc* f : {&psi1, &psi2}) {
      if (sup_bound(*f) > 1.0 + kCertifySlack) {
        const HoloFunc bad = detail::offending_node(*f);
        throw CertificationError("cannot certify sup-norm <= 1 for " + f->to_string() +
                                     "; closure rules fail at " + bad.to_string(),
                                 bad.to_string());
      }
    }
    return SelfMap(std::move(psi1), std::move(psi2), Evidence::ByConstruction, 0, 1.0);
  }

  /// Admits the pair from torus sampling; the result records an estimate only.
  static SelfMap from_grid_estimate(HoloFunc psi1, HoloFunc psi2, int grid = 256) {
    const double m = std::max(sup_norm_estimate(psi1, grid), sup_norm_estimate(psi2, grid));
    if (m > 1.0 + 1e-12) throw CertificationError("grid estimate of sup-norm exceeds 1", format_constant(m));
    return SelfMap(std::move(psi1), std::move(psi2), Evidence::GridEstimate, grid, m);
  }

  static SelfMap identity() { return certify(HoloFunc::z1(), HoloFunc::z2()); }

  /// (r z1, r z2) for 0 < r < 1.
  static SelfMap dilation(double r) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("dilation radius must lie in (0, 1)");
    return certify(HoloFunc::scale(r, HoloFunc::z1()), HoloFunc::scale(r, HoloFunc::z2()));
  }

  const HoloFunc& psi1() const { return psi1_; }
  const HoloFunc& psi2() const { return psi2_; }
  Evidence evidence() const { return evidence_; }
  int grid() const { return grid_; }
  double max_modulus() const { return max_modulus_; }

  std::pair<cplx, cplx> operator()(cplx z1, cplx z2) const { return {psi1_(z1, z2), psi2_(z1, z2)}; }
  std::pair<cplx, cplx> operator()(const BidiskPoint& z) const { return (*this)(z.c1(), z.c2()); }

  std::string to_string() const { return "(" + psi1_.to_string() + ", " + psi2_.to_string() + ")"; }

 private:
  SelfMap(HoloFunc a, HoloFunc b, Evidence e, int grid, double m)
      : psi1_(std::move(a)), psi2_(std::move(b)), evidence_(e), grid_(grid), max_modulus_(m) {}

  HoloFunc psi1_;
  HoloFunc psi2_;
  Evidence evidence_;
  int grid_;
  double max_modulus_;
};

inline SelfMap sup_certify(HoloFunc psi1, HoloFunc psi2) { return SelfMap::certify(std::move(psi1), std::move(psi2)); }

inline HoloFunc compose(const HoloFunc& f, const SelfMap& psi) { return HoloFunc::compose(f, psi.psi1(), psi.psi2()); }

/// f composed with (r z1, r z2).
inline HoloFunc dilate(const HoloFunc& f, double r) { return compose(f, SelfMap::dilation(r)); }

struct Triplet {
  HoloFunc phi1;
  HoloFunc phi2;
  HoloFunc phi3;

  std::string to_string() const {
    return "(" + phi1.to_string() + ", " + phi2.to_string() + ", " + phi3.to_string() + ")";
  }
};

/// (psi1, psi2, psi1 psi2).
inline Triplet product_triplet(const SelfMap& psi) { return {psi.psi1(), psi.psi2(), psi.psi1() * psi.psi2()}; }

/// (psi1/sqrt2, psi2/sqrt2, psi1 psi2 / 2).
inline Triplet scaled_triplet(const SelfMap& psi) {
  const double s = 1.0 / std::numbers::sqrt2;
  return {HoloFunc::scale(s, psi.psi1()), HoloFunc::scale(s, psi.psi2()), HoloFunc::scale(0.5, psi.psi1() * psi.psi2())};
}

// ---------------------------------------------------------------------------
// Lowering to truncated Taylor coefficients.

class LoweringError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Taylor coefficients c[a][b] of z1^a z2^b for 0 <= a, b <= degree, stored
/// row-major by (a, b). Retained coefficients are exact up to rounding;
/// `tail_bound` is a rough bound on what truncation dropped.
struct Series {
  int degree = 0;
  std::vector<cplx> c;
  double tail_bound = 0.0;

  explicit Series(int n = 0) : degree(n), c(static_cast<std::size_t>((n + 1) * (n + 1))) {}

  cplx& at(int a, int b) { return c[static_cast<std::size_t>(a * (degree + 1) + b)]; }
  cplx at(int a, int b) const { return c[static_cast<std::size_t>(a * (degree + 1) + b)]; }

  double l1() const {
    double s = 0.0;
    for (const auto& x : c) s += std::abs(x);
    return s;
  }

  cplx operator()(cplx z1, cplx z2) const {
    cplx acc = 0.0;
    for (int a = degree; a >= 0; --a) {
      cplx row = 0.0;
      for (int b = degree; b >= 0; --b) row = row * z2 + at(a, b);
      acc = acc * z1 + row;
    }
    return acc;
  }
};

namespace detail {

inline Series series_add(const Series& f, const Series& g, cplx gscale = 1.0) {
  Series out(f.degree);
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = f.c[i] + gscale * g.c[i];
  out.tail_bound = f.tail_bound + std::abs(gscale) * g.tail_bound;
  return out;
}

inline Series series_mul(const Series& f, const Series& g) {
  const int n = f.degree;
  Series out(n);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      const cplx fab = f.at(a, b);
      if (fab == 0.0) continue;
      for (int c = 0; a + c <= n; ++c)
        for (int d = 0; b + d <= n; ++d) out.at(a + c, b + d) += fab * g.at(c, d);
    }
  out.tail_bound = f.tail_bound * (g.l1() + g.tail_bound) + g.tail_bound * f.l1();
  return out;
}

inline Series series_truncate(const Series& f, int n) {
  Series out(n);
  for (int a = 0; a <= std::min(n, f.degree); ++a)
    for (int b = 0; b <= std::min(n, f.degree); ++b) out.at(a, b) = f.at(a, b);
  out.tail_bound = f.tail_bound;
  return out;
}

}  // namespace detail

/// Truncated Taylor coefficients of f up to `degree` in each variable.
/// Composition is lowered exactly when the outer function is a polynomial or
/// the inner map fixes the origin; otherwise LoweringError is thrown.
inline Series lower(const HoloFunc& f, int degree) {
  using K = HoloFunc::Kind;
  if (degree < 0) throw std::invalid_argument("lowering degree must be non-negative");
  Series out(degree);
  switch (f.kind()) {
    case K::Constant: out.at(0, 0) = f.value(); return out;
    case K::Coord:
      if (degree >= 1) (f.coord_index() == 1 ? out.at(1, 0) : out.at(0, 1)) = 1.0;
      else out.tail_bound = 1.0;
      return out;
    case K::Blaschke: {
      // b_w(z) = -w + (1 - |w|^2) sum_{k>=1} conj(w)^{k-1} z^k
      const cplx w = f.value();
      const double r = std::abs(w);
      const bool first = f.coord_index() == 1;
      cplx coef = 1.0 - std::norm(w);
      out.at(0, 0) = -w;
      for (int k = 1; k <= degree; ++k) {
        (first ? out.at(k, 0) : out.at(0, k)) = coef;
        coef *= std::conj(w);
      }
      out.tail_bound = r == 0.0 ? 0.0 : std::pow(r, degree + 1) / (1.0 - r);
      return out;
    }
    case K::Sum: return detail::series_add(lower(f.child(0), degree), lower(f.child(1), degree));
    case K::Scale: {
      Series g = lower(f.child(0), degree);
      for (auto& x : g.c) x *= f.value();
      g.tail_bound *= std::abs(f.value());
      return g;
    }
    case K::Product: return detail::series_mul(lower(f.child(0), degree), lower(f.child(1), degree));
    case K::Compose: {
      const HoloFunc& outer = f.child(0);
      const Series u1 = lower(f.child(1), degree);
      const Series u2 = lower(f.child(2), degree);
      const Bidegree od = outer.bidegree();
      const bool fixes_origin = u1.at(0, 0) == 0.0 && u2.at(0, 0) == 0.0;
      int outer_degree = 0;
      if (od.finite()) {
        outer_degree = std::max(od.d1, od.d2);
        if (fixes_origin) outer_degree = std::min(outer_degree, 2 * degree);
      } else if (fixes_origin) {
        outer_degree = 2 * degree;
      } else {
        throw LoweringError("cannot lower " + f.to_string() +
                            ": rational outer function composed with a map that moves the origin");
      }
      const Series c = lower(outer, outer_degree);
      // sum_a u1^a * (sum_b c[a][b] u2^b); with the origin fixed, terms with
      // a + b > 2 * degree vanish after truncation.
      std::vector<Series> u2pow{Series(degree)};
      u2pow[0].at(0, 0) = 1.0;
      for (int b = 1; b <= outer_degree; ++b) u2pow.push_back(detail::series_mul(u2pow.back(), u2));
      Series u1pow(degree);
      u1pow.at(0, 0) = 1.0;
      for (int a = 0; a <= outer_degree; ++a) {
        Series inner(degree);
        for (int b = 0; b <= outer_degree; ++b) {
          if (fixes_origin && a + b > 2 * degree) break;
          const cplx cab = c.at(a, b);
          if (cab == 0.0) continue;
          for (std::size_t i = 0; i < inner.c.size(); ++i) inner.c[i] += cab * u2pow[b].c[i];
        }
        out = detail::series_add(out, detail::series_mul(u1pow, inner));
        if (a < outer_degree) u1pow = detail::series_mul(u1pow, u1);
      }
      out.tail_bound = c.tail_bound + u1.tail_bound + u2.tail_bound;
      return out;
    }
  }
  return out;
}

}  // namespace bidisk
