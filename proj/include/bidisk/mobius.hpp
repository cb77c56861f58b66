#pragma once

// Disk and bidisk primitives: points, Blaschke factors, the one-variable
// pseudo-hyperbolic distance and the automorphisms of the bidisk.

#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bidisk {

using cplx = std::complex<double>;

/// Points with |z| >= 1 - kDiskMargin are rejected by DiskPoint.
inline constexpr double kDiskMargin = 1e-15;
/// Smallest admissible |1 - conj(w) z| in a Blaschke evaluation.
inline constexpr double kPoleGuard = 1e-300;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline std::string format_complex(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real();
  if (z.imag() != 0.0) os << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "i";
  return os.str();
}

/// A point of the open unit disk.
class DiskPoint {
 public:
  constexpr DiskPoint() = default;

  explicit DiskPoint(cplx value) : value_(value) {
    if (!(std::abs(value) < 1.0 - kDiskMargin))
      throw DomainError("point " + format_complex(value) + " is not in the open unit disk");
  }
  explicit DiskPoint(double re, double im = 0.0) : DiskPoint(cplx(re, im)) {}

  constexpr cplx value() const { return value_; }
  double modulus() const { return std::abs(value_); }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  cplx value_{};
};

/// A point of the unit circle, used only for boundary sampling.
class TorusPoint {
 public:
  explicit TorusPoint(double angle) : value_(std::polar(1.0, angle)) {}
  cplx value() const { return value_; }

 private:
  cplx value_;
};

struct BidiskPoint {
  DiskPoint z1;
  DiskPoint z2;

  BidiskPoint() = default;
  BidiskPoint(DiskPoint a, DiskPoint b) : z1(a), z2(b) {}
  BidiskPoint(cplx a, cplx b) : z1(a), z2(b) {}

  cplx c1() const { return z1.value(); }
  cplx c2() const { return z2.value(); }

  friend bool operator==(const BidiskPoint&, const BidiskPoint&) = default;
};

/// b_w(z) = (z - w) / (1 - conj(w) z). `z` may lie on the closed disk.
inline cplx blaschke_eval(cplx w, cplx z) {
  const cplx den = 1.0 - std::conj(w) * z;
  if (std::abs(den) < kPoleGuard) throw DomainError("Blaschke factor evaluated at its pole");
  return (z - w) / den;
}
inline cplx blaschke_eval(DiskPoint w, cplx z) { return blaschke_eval(w.value(), z); }
inline cplx blaschke_eval(DiskPoint w, DiskPoint z) { return blaschke_eval(w.value(), z.value()); }

/// 1 - |b_w(z)|^2 computed as (1-|z|^2)(1-|w|^2)/|1-conj(w)z|^2, which keeps
/// full relative accuracy when the distance is close to 1.
inline double dist1_complement_sq(cplx z, cplx w) {
  const double den = std::norm(1.0 - std::conj(w) * z);
  return (1.0 - std::norm(z)) * (1.0 - std::norm(w)) / den;
}

/// One-variable pseudo-hyperbolic distance |b_w(z)|.
inline double dist1(cplx z, cplx w) { return std::abs(z - w) / std::abs(1.0 - std::conj(w) * z); }
inline double dist1(DiskPoint z, DiskPoint w) { return dist1(z.value(), w.value()); }

/// z -> e^{i theta} b_w(z). The inverse is e^{-i theta} b_{-e^{i theta} w}.
struct DiskAutomorphism {
  double theta = 0.0;
  DiskPoint center{};

  cplx operator()(cplx z) const { return std::polar(1.0, theta) * blaschke_eval(center, z); }

  DiskAutomorphism inverse() const { return {-theta, DiskPoint(-std::polar(1.0, theta) * center.value())}; }
};

/// Normal form: optional coordinate swap, then a Blaschke factor in each
/// coordinate, then a rotation in each coordinate.
struct BidiskAutomorphism {
  double theta1 = 0.0;
  double theta2 = 0.0;
  DiskPoint w1{};
  DiskPoint w2{};
  bool swap = false;

  static BidiskAutomorphism identity() { return {}; }
  static BidiskAutomorphism swap_only() { return {0.0, 0.0, {}, {}, true}; }

  DiskAutomorphism first() const { return {theta1, w1}; }
  DiskAutomorphism second() const { return {theta2, w2}; }
};

/// Applies g to a point of the closed bidisk given by raw coordinates.
inline std::pair<cplx, cplx> aut_apply(const BidiskAutomorphism& g, cplx z1, cplx z2) {
  if (g.swap) std::swap(z1, z2);
  return {g.first()(z1), g.second()(z2)};
}

inline BidiskPoint aut_apply(const BidiskAutomorphism& g, const BidiskPoint& z) {
  auto [a, b] = aut_apply(g, z.c1(), z.c2());
  return {a, b};
}

inline BidiskAutomorphism aut_inverse(const BidiskAutomorphism& g) {
  // Without swap the coordinates invert independently; with swap the
  // coordinate-1 map of the inverse undoes the coordinate-2 map of g.
  const DiskAutomorphism a = (g.swap ? g.second() : g.first()).inverse();
  const DiskAutomorphism b = (g.swap ? g.first() : g.second()).inverse();
  return {a.theta, b.theta, a.center, b.center, g.swap};
}

}  // namespace bidisk
