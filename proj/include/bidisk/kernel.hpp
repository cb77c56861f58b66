#pragma once

// Szegő kernel of the bidisk, the indefinite kernel of a triplet and Pick
// matrix assembly.

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bidisk/funcspace.hpp"
#include "bidisk/psd.hpp"

namespace bidisk {

/// k_lambda(z) = 1 / ((1 - conj(l1) z1)(1 - conj(l2) z2)).
inline cplx szego(cplx l1, cplx l2, cplx z1, cplx z2) {
  return 1.0 / ((1.0 - std::conj(l1) * z1) * (1.0 - std::conj(l2) * z2));
}
inline cplx szego(const BidiskPoint& lambda, const BidiskPoint& z) { return szego(lambda.c1(), lambda.c2(), z.c1(), z.c2()); }

/// Values (phi1, phi2, phi3) of a triplet at one point.
struct TripletValue {
  cplx v1, v2, v3;
};

inline TripletValue evaluate(const Triplet& t, const BidiskPoint& z) { return {t.phi1(z), t.phi2(z), t.phi3(z)}; }

/// conj(phi1(l)) phi1(z) + conj(phi2(l)) phi2(z) - conj(phi3(l)) phi3(z).
inline cplx phi_kernel(const TripletValue& at_z, const TripletValue& at_lambda) {
  return std::conj(at_lambda.v1) * at_z.v1 + std::conj(at_lambda.v2) * at_z.v2 - std::conj(at_lambda.v3) * at_z.v3;
}

inline cplx phi(const Triplet& t, const BidiskPoint& z, const BidiskPoint& lambda) {
  return phi_kernel(evaluate(t, z), evaluate(t, lambda));
}

enum class PickKind { P, Q };

inline const char* to_string(PickKind k) { return k == PickKind::P ? "P" : "Q"; }

struct PickMatrix {
  PickKind kind = PickKind::P;
  std::vector<BidiskPoint> points;
  CMatrix entries;
};

inline constexpr std::size_t kMaxPickPoints = 64;
/// Points closer than this in every coordinate count as duplicates.
inline constexpr double kDuplicateTol = 1e-12;

inline void require_distinct(const std::vector<BidiskPoint>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (std::abs(pts[i].c1() - pts[j].c1()) <= kDuplicateTol && std::abs(pts[i].c2() - pts[j].c2()) <= kDuplicateTol)
        throw std::invalid_argument("Pick matrix points " + std::to_string(i) + " and " + std::to_string(j) +
                                    " coincide");
}

/// A[i][j] = K(l_i, l_j) with K conjugate-linear in its second argument:
/// Phi(l_i, l_j) k(l_j, l_i) for P, (1 - Phi(l_i, l_j)) k(l_j, l_i) for Q.
inline PickMatrix pick_matrix(PickKind kind, const Triplet& t, const std::vector<BidiskPoint>& points,
                              std::size_t max_points = kMaxPickPoints) {
  if (points.empty()) throw std::invalid_argument("Pick matrix needs at least one point");
  if (points.size() > max_points)
    throw std::invalid_argument("Pick matrix capped at " + std::to_string(max_points) + " points");
  require_distinct(points);

  const auto n = static_cast<Eigen::Index>(points.size());
  std::vector<TripletValue> vals;
  vals.reserve(points.size());
  for (const auto& p : points) vals.push_back(evaluate(t, p));

  PickMatrix pm{kind, points, CMatrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& li = points[static_cast<std::size_t>(i)];
      const auto& lj = points[static_cast<std::size_t>(j)];
      const cplx ph = phi_kernel(vals[static_cast<std::size_t>(i)], vals[static_cast<std::size_t>(j)]);
      const cplx k = szego(lj, li);
      pm.entries(i, j) = (kind == PickKind::P ? ph : 1.0 - ph) * k;
    }
  return pm;
}

/// Max over (i, j) of |k(l_j, l_i) / k(psi(l_j), psi(l_i)) - Q_ij|, where Q is
/// the Q-kind Pick matrix of (psi1, psi2, psi1 psi2).
inline double schur_ratio_identity_check(const SelfMap& psi, const std::vector<BidiskPoint>& points) {
  const PickMatrix q = pick_matrix(PickKind::Q, product_triplet(psi), points);
  std::vector<std::pair<cplx, cplx>> images;
  for (const auto& p : points) images.push_back(psi(p));
  double worst = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) {
      const auto& [a1, a2] = images[i];
      const auto& [b1, b2] = images[j];
      const cplx ratio = szego(points[j], points[i]) / szego(b1, b2, a1, a2);
      worst = std::max(worst, std::abs(ratio - q.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
    }
  return worst;
}

}  // namespace bidisk
