#pragma once

// Finite-sample evidence for the triplet classes P, Q and S.
//
// A triplet is in P when its P-kind Pick matrices are positive semidefinite
// on every finite point set, in Q when its Q-kind matrices are, and in S when
// both hold. A negative eigenvalue on one point set disproves membership;
// no finite computation proves it, so the positive outcome is reported as
// "no violation found", never as membership.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bidisk/funcspace.hpp"
#include "bidisk/kernel.hpp"
#include "bidisk/parallel.hpp"
#include "bidisk/psd.hpp"
#include "bidisk/rng.hpp"

namespace bidisk {

enum class TripletClass { P, Q, S };

inline const char* to_string(TripletClass c) {
  switch (c) {
    case TripletClass::P: return "P";
    case TripletClass::Q: return "Q";
    case TripletClass::S: return "S";
  }
  return "?";
}

inline TripletClass parse_class(const std::string& s) {
  if (s == "P") return TripletClass::P;
  if (s == "Q") return TripletClass::Q;
  if (s == "S") return TripletClass::S;
  throw std::invalid_argument("class must be one of P, Q, S; got '" + s + "'");
}

enum class Verdict { ViolationCertified, NoViolationFound };

inline const char* to_string(Verdict v) {
  return v == Verdict::ViolationCertified ? "violation_certified" : "no_violation_found";
}

struct Certificate {
  std::string triplet;
  TripletClass cls = TripletClass::S;
  Verdict verdict = Verdict::NoViolationFound;
  /// Most negative eigenvalue seen, and the kernel kind and matrix scale it came from.
  double min_eigenvalue = 0.0;
  PickKind kind = PickKind::P;
  double scale = 0.0;
  std::vector<BidiskPoint> witness_points;
  std::size_t matrix_size = 0;
  double tol = kDefaultPsdTol;
  std::uint64_t seed = 0;
  int trials = 0;
  int best_trial = -1;

  bool violated() const { return verdict == Verdict::ViolationCertified; }

  /// Eigenvalue relative to the verdict threshold scale; the search ranks by this.
  double normalized() const { return min_eigenvalue / std::max(1.0, scale); }
};

namespace detail {

inline bool kinds_include(TripletClass c, PickKind k) {
  return c == TripletClass::S || (c == TripletClass::P) == (k == PickKind::P);
}

}  // namespace detail

/// Positivity of the Pick matrices required by `cls` on one point set. For S
/// both kinds are tested and the one with the lower normalized eigenvalue is
/// reported.
inline Certificate membership_check(const Triplet& t, TripletClass cls, const std::vector<BidiskPoint>& points,
                                    double tol = kDefaultPsdTol) {
  Certificate cert;
  cert.triplet = t.to_string();
  cert.cls = cls;
  cert.tol = tol;
  cert.trials = 1;
  cert.best_trial = 0;
  cert.matrix_size = points.size();
  cert.witness_points = points;

  bool first = true;
  for (PickKind kind : {PickKind::P, PickKind::Q}) {
    if (!detail::kinds_include(cls, kind)) continue;
    const PickMatrix pm = pick_matrix(kind, t, points);
    const PsdVerdict v = is_psd(pm.entries, tol);
    const double normalized = v.min_eigenvalue / std::max(1.0, v.scale);
    if (first || normalized < cert.normalized()) {
      cert.min_eigenvalue = v.min_eigenvalue;
      cert.scale = v.scale;
      cert.kind = kind;
      cert.verdict = v.psd ? Verdict::NoViolationFound : Verdict::ViolationCertified;
    }
    first = false;
  }
  return cert;
}

/// Rebuilds the reported Pick matrix at the witness points and returns its
/// smallest eigenvalue.
inline double replay_min_eigenvalue(const Triplet& t, const Certificate& cert) {
  return eigen_min(pick_matrix(cert.kind, t, cert.witness_points).entries).value;
}

struct SearchConfig {
  std::uint64_t seed = 0;
  int trials = 200;
  int n_points = 8;
  double boundary_bias = 0.3;
  double tol = kDefaultPsdTol;
  unsigned threads = 0;  // 0: hardware concurrency; results do not depend on it
};

/// Point set of one search trial. Coordinates are drawn in the order
/// (point 0: z1, z2), (point 1: z1, z2), ... from the trial's own stream.
inline std::vector<BidiskPoint> trial_points(std::uint64_t seed, std::uint64_t trial, int n_points, double boundary_bias) {
  Xoshiro256 rng = Xoshiro256::stream(seed, trial);
  std::vector<BidiskPoint> pts;
  pts.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const cplx a = sample_disk(rng, boundary_bias);
    const cplx b = sample_disk(rng, boundary_bias);
    pts.emplace_back(a, b);
  }
  return pts;
}

/// Seeded search for a negative Pick-matrix eigenvalue over random point sets.
/// Returns the certificate of the trial with the lowest normalized minimum
/// eigenvalue, ties going to the lowest trial index.
inline Certificate violation_search(const Triplet& t, TripletClass cls, const SearchConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("violation_search needs at least one trial");
  if (cfg.n_points < 2 || cfg.n_points > 16) throw std::invalid_argument("violation_search uses 2 to 16 points per set");
  if (cfg.boundary_bias < 0.0 || cfg.boundary_bias > 1.0) throw std::invalid_argument("boundary_bias must lie in [0, 1]");

  std::vector<Certificate> per_trial(static_cast<std::size_t>(cfg.trials));
  parallel_fill(
      per_trial,
      [&](std::size_t i) {
        return membership_check(t, cls, trial_points(cfg.seed, i, cfg.n_points, cfg.boundary_bias), cfg.tol);
      },
      cfg.threads);

  std::size_t best = 0;
  for (std::size_t i = 1; i < per_trial.size(); ++i)
    if (per_trial[i].normalized() < per_trial[best].normalized()) best = i;

  Certificate cert = per_trial[best];
  cert.seed = cfg.seed;
  cert.trials = cfg.trials;
  cert.best_trial = static_cast<int>(best);
  return cert;
}

/// (phi1 o psi, phi2 o psi, phi3 o psi).
inline Triplet compose_triplet(const Triplet& t, const SelfMap& psi) {
  return {compose(t.phi1, psi), compose(t.phi2, psi), compose(t.phi3, psi)};
}

struct ClosureCertificate {
  /// Search for a Q violation of (psi1, psi2, psi1 psi2); a violation means
  /// the closure hypothesis fails for psi.
  Certificate precondition;
  Certificate composed;
};

inline ClosureCertificate composition_closure_check(const Triplet& t, TripletClass cls, const SelfMap& psi,
                                                    const SearchConfig& cfg) {
  return {violation_search(product_triplet(psi), TripletClass::Q, cfg),
          violation_search(compose_triplet(t, psi), cls, cfg)};
}

/// Largest value and the index attaining it.
struct GapStat {
  double max = -std::numeric_limits<double>::infinity();
  std::size_t argmax = 0;
};

inline constexpr double kOriginTol = 1e-12;

/// max over points of max(-D(z), D(z) - c (|z1|^2 + |z2|^2 - |z1 z2|^2)) with
/// D(z) = |phi1|^2 + |phi2|^2 - |phi3|^2. Requires phi1(0) = phi2(0) = 0.
inline GapStat schwarz_diag_check(const Triplet& t, const std::vector<BidiskPoint>& points, double factor = 2.0) {
  if (!(factor > 0.0)) throw std::invalid_argument("Schwarz factor must be positive");
  const BidiskPoint origin{0.0, 0.0};
  if (std::abs(t.phi1(origin)) > kOriginTol) throw std::invalid_argument("phi1 does not vanish at the origin: " + t.phi1.to_string());
  if (std::abs(t.phi2(origin)) > kOriginTol) throw std::invalid_argument("phi2 does not vanish at the origin: " + t.phi2.to_string());

  GapStat g;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& z = points[i];
    const double d = phi(t, z, z).real();
    const double bound = std::norm(z.c1()) + std::norm(z.c2()) - std::norm(z.c1() * z.c2());
    const double v = std::max(-d, d - factor * bound);
    if (v > g.max) g = {v, i};
  }
  return g;
}

}  // namespace bidisk
