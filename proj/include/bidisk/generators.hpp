#pragma once

// Seeded constructors of functions and self-maps whose sup-norm bound holds
// by construction, so every result passes SelfMap::certify.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "bidisk/funcspace.hpp"
#include "bidisk/mobius.hpp"
#include "bidisk/rng.hpp"

namespace bidisk::gen {

inline cplx unimodular(Xoshiro256& rng) { return std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform()); }

inline DiskPoint zero_point(Xoshiro256& rng, double radius = 0.9) { return DiskPoint(sample_disk_within(rng, radius)); }

/// Finite Blaschke product of degree 1 to `max_degree` in z_j with a unimodular factor.
inline HoloFunc blaschke_product(Xoshiro256& rng, int j, int max_degree = 2) {
  const int deg = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_degree)));
  HoloFunc f = HoloFunc::constant(unimodular(rng));
  for (int k = 0; k < deg; ++k) f = f * HoloFunc::blaschke(zero_point(rng), j);
  return f;
}

namespace detail {

/// A bounded-by-one leaf or product in both variables.
inline HoloFunc atom(Xoshiro256& rng, bool allow_compose) {
  switch (rng.below(allow_compose ? 5 : 4)) {
    case 0: return HoloFunc::coord(1 + static_cast<int>(rng.below(2)));
    case 1: return HoloFunc::blaschke(zero_point(rng), 1 + static_cast<int>(rng.below(2)));
    case 2: return HoloFunc::scale(unimodular(rng), HoloFunc::z1() * HoloFunc::z2());
    case 3: return HoloFunc::constant(sample_disk_within(rng, 0.95));
    default: {
      // b_w(z1 z2)
      const HoloFunc inner = HoloFunc::z1() * HoloFunc::z2();
      return HoloFunc::compose(HoloFunc::blaschke(zero_point(rng), 1), inner, HoloFunc::z2());
    }
  }
}

}  // namespace detail

/// Convex combination of products of atoms. With `allow_compose` false the
/// result lowers to a Taylor series.
inline HoloFunc bounded_function(Xoshiro256& rng, bool allow_compose = true) {
  const int terms = 1 + static_cast<int>(rng.below(3));
  std::vector<double> w(static_cast<std::size_t>(terms));
  double total = 0.0;
  for (auto& x : w) total += (x = 0.1 + rng.uniform());
  HoloFunc f;
  for (int k = 0; k < terms; ++k) {
    HoloFunc term = detail::atom(rng, allow_compose);
    if (rng.uniform() < 0.5) term = term * detail::atom(rng, allow_compose);
    term = HoloFunc::scale(w[static_cast<std::size_t>(k)] / total * unimodular(rng), term);
    f = k == 0 ? term : f + term;
  }
  return f;
}

inline SelfMap self_map(Xoshiro256& rng, bool allow_compose = true) {
  return SelfMap::certify(bounded_function(rng, allow_compose), bounded_function(rng, allow_compose));
}

/// psi(0) = 0: each coordinate is a convex combination of z_k times a bounded factor.
inline SelfMap origin_fixing_self_map(Xoshiro256& rng, bool allow_compose = true) {
  auto vanishing = [&] {
    const int terms = 1 + static_cast<int>(rng.below(2));
    const double a = terms == 1 ? 1.0 : 0.2 + 0.6 * rng.uniform();
    HoloFunc f = HoloFunc::scale(a * unimodular(rng),
                                 HoloFunc::coord(1 + static_cast<int>(rng.below(2))) * bounded_function(rng, allow_compose));
    if (terms == 2) f = f + HoloFunc::scale((1.0 - a) * unimodular(rng), HoloFunc::z1() * HoloFunc::z2());
    return f;
  };
  return SelfMap::certify(vanishing(), vanishing());
}

/// (psi1(z1), psi2(z2)) with finite Blaschke products.
inline SelfMap tensor_self_map(Xoshiro256& rng, int max_degree = 2) {
  return SelfMap::certify(blaschke_product(rng, 1, max_degree), blaschke_product(rng, 2, max_degree));
}

}  // namespace bidisk::gen
