#pragma once

// The indefinite pseudo-hyperbolic distance on the bidisk
//
//   d(z, w)^2 = |b1|^2 + |b2|^2 - |b1 b2|^2,   b_j = b_{w_j}(z_j),
//
// its metric properties, the Kreĭn form on C^3 and the Schwarz-Pick checks
// for self-maps.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "bidisk/classes.hpp"
#include "bidisk/funcspace.hpp"
#include "bidisk/mobius.hpp"
#include "bidisk/parallel.hpp"
#include "bidisk/rng.hpp"

namespace bidisk {

/// d from raw coordinates, via d^2 = d1^2 + (1 - d1^2) d2^2 with 1 - d1^2
/// taken from its product formula. Every term is non-negative.
inline double dist(cplx z1, cplx z2, cplx w1, cplx w2) {
  const double d1 = dist1(z1, w1);
  const double d2 = dist1(z2, w2);
  return std::sqrt(d1 * d1 + dist1_complement_sq(z1, w1) * d2 * d2);
}

inline double dist(const BidiskPoint& z, const BidiskPoint& w) { return dist(z.c1(), z.c2(), w.c1(), w.c2()); }

/// Direct radical form; kept as an independent route.
inline double dist_radical(const BidiskPoint& z, const BidiskPoint& w) {
  const cplx b1 = blaschke_eval(w.z1, z.z1);
  const cplx b2 = blaschke_eval(w.z2, z.z2);
  return std::sqrt(std::max(0.0, std::norm(b1) + std::norm(b2) - std::norm(b1 * b2)));
}

/// |(1 - d(z,w)^2) - (1 - d1^2)(1 - d2^2)|.
inline double product_identity_gap(const BidiskPoint& z, const BidiskPoint& w) {
  const double d = dist(z, w);
  const double d1 = dist1(z.z1, w.z1);
  const double d2 = dist1(z.z2, w.z2);
  return std::abs((1.0 - d * d) - (1.0 - d1 * d1) * (1.0 - d2 * d2));
}

/// Element of C^3 with the form <u, v> = u1 conj(v1) + u2 conj(v2) - u3 conj(v3).
struct KreinVector {
  cplx c1, c2, c3;
};

inline cplx krein_form(const KreinVector& u, const KreinVector& v) {
  return u.c1 * std::conj(v.c1) + u.c2 * std::conj(v.c2) - u.c3 * std::conj(v.c3);
}

/// (z1, z2) -> (z1, z2, z1 z2); accepts closed-bidisk coordinates.
inline KreinVector krein_embed(cplx z1, cplx z2) { return {z1, z2, z1 * z2}; }
inline KreinVector krein_embed(const BidiskPoint& z) { return krein_embed(z.c1(), z.c2()); }

/// d(z,w) - d(z,v) - d(v,w); non-positive for a metric.
inline double triangle_check(const BidiskPoint& z, const BidiskPoint& w, const BidiskPoint& v) {
  return dist(z, w) - dist(z, v) - dist(v, w);
}

inline double aut_invariance_gap(const BidiskAutomorphism& g, const BidiskPoint& z, const BidiskPoint& w) {
  const auto [a1, a2] = aut_apply(g, z.c1(), z.c2());
  const auto [b1, b2] = aut_apply(g, w.c1(), w.c2());
  return std::abs(dist(a1, a2, b1, b2) - dist(z, w));
}

enum class SchwarzMode { General, QClass };

inline const char* to_string(SchwarzMode m) { return m == SchwarzMode::General ? "general" : "q_class"; }

/// sqrt(2) for every self-map, 1 when (psi1, psi2, psi1 psi2) is in Q.
inline double schwarz_constant(SchwarzMode m) { return m == SchwarzMode::General ? std::numbers::sqrt2 : 1.0; }

/// d(psi(z), psi(w)) - C d(z, w).
inline double schwarz_pick_check(const SelfMap& psi, const BidiskPoint& z, const BidiskPoint& w, SchwarzMode mode) {
  const auto [a1, a2] = psi(z);
  const auto [b1, b2] = psi(w);
  return dist(a1, a2, b1, b2) - schwarz_constant(mode) * dist(z, w);
}

struct CorollaryGaps {
  double sharp_gap = 0.0;  // |b_{f(w)}(f(z))| - d(z, w)
  double squared_gap = 0.0;  // |b_{f(w)}(f(z))|^2 - d(z, w)
};

/// For f with sup-norm at most 1.
inline CorollaryGaps corollary_check(const HoloFunc& f, const BidiskPoint& z, const BidiskPoint& w) {
  const cplx fz = f(z);
  const cplx fw = f(w);
  const cplx den = 1.0 - std::conj(fw) * fz;
  if (std::abs(den) < 1e-300) throw DomainError("corollary_check: f attains modulus 1 inside the bidisk");
  const double lhs = std::abs((fz - fw) / den);
  const double d = dist(z, w);
  return {lhs - d, lhs * lhs - d};
}

// ---------------------------------------------------------------------------
// Sweeps.

struct PointPair {
  BidiskPoint z;
  BidiskPoint w;
};

/// Pair `index` of a seeded pair sweep; z then w, each as (z1, z2).
inline PointPair sample_pair(std::uint64_t seed, std::uint64_t index, double boundary_bias) {
  Xoshiro256 rng = Xoshiro256::stream(seed, index);
  const cplx a = sample_disk(rng, boundary_bias), b = sample_disk(rng, boundary_bias);
  const cplx c = sample_disk(rng, boundary_bias), d = sample_disk(rng, boundary_bias);
  return {{a, b}, {c, d}};
}

inline BidiskAutomorphism sample_automorphism(Xoshiro256& rng, double max_center = 0.9) {
  BidiskAutomorphism g;
  g.theta1 = 2.0 * std::numbers::pi * rng.uniform();
  g.theta2 = 2.0 * std::numbers::pi * rng.uniform();
  g.w1 = DiskPoint(sample_disk_within(rng, max_center));
  g.w2 = DiskPoint(sample_disk_within(rng, max_center));
  g.swap = rng.uniform() < 0.5;
  return g;
}

struct PointTriple {
  BidiskPoint z, w, v;
};

/// Triple `index` of a metric sweep.
inline PointTriple metric_triple(std::uint64_t seed, std::uint64_t index, double boundary_bias) {
  Xoshiro256 rng = Xoshiro256::stream(seed, index);
  const cplx a = sample_disk(rng, boundary_bias), b = sample_disk(rng, boundary_bias);
  const cplx c = sample_disk(rng, boundary_bias), d = sample_disk(rng, boundary_bias);
  const cplx e = sample_disk(rng, boundary_bias), f = sample_disk(rng, boundary_bias);
  return {{a, b}, {c, d}, {e, f}};
}

/// Automorphisms used by metric_sweep for a given seed.
inline std::vector<BidiskAutomorphism> metric_automorphisms(std::uint64_t seed, int count) {
  Xoshiro256 rng = Xoshiro256::stream(seed, ~std::uint64_t{0});
  std::vector<BidiskAutomorphism> auts;
  for (int k = 0; k < count; ++k) auts.push_back(sample_automorphism(rng));
  return auts;
}

struct MetricGaps {
  GapStat symmetry;
  GapStat triangle;
  GapStat product_identity;
  GapStat invariance;
  GapStat radical_agreement;
  /// min over pairs of d when the coordinates differ by at least 1e-4.
  double min_separated_distance = 1.0;
  double max_distance = 0.0;
  std::size_t trials = 0;
};

inline void merge_max(GapStat& g, double v, std::size_t i) {
  if (v > g.max) g = {v, i};
}

/// Metric axioms on `trials` seeded triples (z, w, v), plus invariance under
/// `automorphisms` seeded automorphisms applied to each (z, w).
inline MetricGaps metric_sweep(std::uint64_t seed, std::size_t trials, double boundary_bias = 0.3,
                               int automorphisms = 10, unsigned threads = 0) {
  const auto auts = metric_automorphisms(seed, automorphisms);

  struct Row {
    double sym, tri, ident, inv, rad, sep, dmax;
  };
  std::vector<Row> rows(trials);
  parallel_fill(
      rows,
      [&](std::size_t i) {
        const auto [z, w, v] = metric_triple(seed, i, boundary_bias);
        Row r{};
        const double dzw = dist(z, w);
        r.sym = std::abs(dzw - dist(w, z));
        r.tri = triangle_check(z, w, v);
        r.ident = product_identity_gap(z, w);
        r.inv = 0.0;
        for (const auto& g : auts) r.inv = std::max(r.inv, aut_invariance_gap(g, z, w));
        r.rad = std::abs(dzw - dist_radical(z, w));
        const double sep = std::max(std::abs(z.c1() - w.c1()), std::abs(z.c2() - w.c2()));
        r.sep = sep >= 1e-4 ? dzw : 1.0;
        r.dmax = dzw;
        return r;
      },
      threads);

  MetricGaps out;
  out.trials = trials;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    merge_max(out.symmetry, rows[i].sym, i);
    merge_max(out.triangle, rows[i].tri, i);
    merge_max(out.product_identity, rows[i].ident, i);
    merge_max(out.invariance, rows[i].inv, i);
    merge_max(out.radical_agreement, rows[i].rad, i);
    out.min_separated_distance = std::min(out.min_separated_distance, rows[i].sep);
    out.max_distance = std::max(out.max_distance, rows[i].dmax);
  }
  return out;
}

struct SchwarzSweepRow {
  PointPair pair;
  double d = 0.0;      // d(z, w)
  double gap = 0.0;    // d(psi z, psi w) - C d(z, w)
};

struct SchwarzSweep {
  GapStat gap;
  PointPair worst;
  std::vector<SchwarzSweepRow> rows;
  /// q_class only: every gap on a small patch around the first pair exceeds
  /// -1e-10, suggesting an automorphism. A hint, never a classification.
  bool near_equality = false;
};

inline constexpr double kNearEqualityTol = 1e-10;

inline SchwarzSweep schwarz_pick_sweep(const SelfMap& psi, SchwarzMode mode, std::size_t pairs, std::uint64_t seed,
                                       double boundary_bias = 0.3, unsigned threads = 0) {
  SchwarzSweep out;
  out.rows.resize(pairs);
  parallel_fill(
      out.rows,
      [&](std::size_t i) {
        SchwarzSweepRow r;
        r.pair = sample_pair(seed, i, boundary_bias);
        r.d = dist(r.pair.z, r.pair.w);
        r.gap = schwarz_pick_check(psi, r.pair.z, r.pair.w, mode);
        return r;
      },
      threads);
  for (std::size_t i = 0; i < out.rows.size(); ++i) merge_max(out.gap, out.rows[i].gap, i);
  if (!out.rows.empty()) out.worst = out.rows[out.gap.argmax].pair;

  if (mode == SchwarzMode::QClass) {
    // Patch of radius 1e-2 around a fixed interior base pair.
    Xoshiro256 rng = Xoshiro256::stream(seed, ~std::uint64_t{1});
    const BidiskPoint z0{0.3, cplx(0.0, -0.2)}, w0{cplx(-0.1, 0.25), 0.15};
    bool all_close = true;
    for (int k = 0; k < 16 && all_close; ++k) {
      const BidiskPoint z{z0.c1() + sample_disk_within(rng, 1e-2), z0.c2() + sample_disk_within(rng, 1e-2)};
      const BidiskPoint w{w0.c1() + sample_disk_within(rng, 1e-2), w0.c2() + sample_disk_within(rng, 1e-2)};
      all_close = schwarz_pick_check(psi, z, w, mode) > -kNearEqualityTol;
    }
    out.near_equality = all_close;
  }
  return out;
}

/// CSV rows "z1re,z1im,z2re,z2im,w1re,w1im,w2re,w2im,d,gap" with a header.
inline void write_sweep_csv(std::ostream& os, const std::vector<SchwarzSweepRow>& rows) {
  os << "z1_re,z1_im,z2_re,z2_im,w1_re,w1_im,w2_re,w2_im,d,gap\n";
  os.precision(17);
  for (const auto& r : rows) {
    const auto& z = r.pair.z;
    const auto& w = r.pair.w;
    os << z.c1().real() << ',' << z.c1().imag() << ',' << z.c2().real() << ',' << z.c2().imag() << ',' << w.c1().real()
       << ',' << w.c1().imag() << ',' << w.c2().real() << ',' << w.c2().imag() << ',' << r.d << ',' << r.gap << '\n';
  }
}

}  // namespace bidisk
