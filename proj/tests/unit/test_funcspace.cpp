#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "bidisk/funcspace.hpp"
#include "bidisk/generators.hpp"
#include "bidisk/rng.hpp"

using namespace bidisk;
using Catch::Matchers::WithinAbs;

namespace {
const HoloFunc z1 = HoloFunc::z1();
const HoloFunc z2 = HoloFunc::z2();
const HoloFunc half = HoloFunc::constant(0.5);
}  // namespace

TEST_CASE("evaluation of small trees") {
  CHECK_THAT(std::abs((z1 * z2)(BidiskPoint{0.5, -0.5}) - (-0.25)), WithinAbs(0.0, 1e-16));
  CHECK(HoloFunc::constant(0.0)(BidiskPoint{0.3, 0.1}) == cplx(0.0));
  CHECK_THAT(std::abs(HoloFunc::scale(0.5, z1 + z2)(BidiskPoint{0.6, 0.2}) - 0.4), WithinAbs(0.0, 1e-16));
}

TEST_CASE("evaluation respects ring operations") {
  Xoshiro256 rng = Xoshiro256::stream(21, 0);
  for (int k = 0; k < 200; ++k) {
    const HoloFunc f = gen::bounded_function(rng), g = gen::bounded_function(rng);
    const BidiskPoint z{sample_disk(rng, 0.3), sample_disk(rng, 0.3)};
    const cplx fz = f(z), gz = g(z);
    CHECK(std::abs((f * g)(z) - fz * gz) <= 1e-13 * std::max(1.0, std::abs(fz * gz)));
    CHECK(std::abs((f + g)(z) - (fz + gz)) <= 1e-13 * std::max(1.0, std::abs(fz) + std::abs(gz)));
  }
}

TEST_CASE("bidegree bookkeeping") {
  const HoloFunc f = z1 * z1 * z2 + HoloFunc::constant(3.0);
  CHECK(f.bidegree().d1 == 2);
  CHECK(f.bidegree().d2 == 1);
  CHECK_FALSE(HoloFunc::blaschke(DiskPoint(0.3), 1).bidegree().finite());
  CHECK(HoloFunc::blaschke(DiskPoint(0.0), 2).bidegree().d1 == 0);
}

TEST_CASE("closure-rule certification accepts the standard maps") {
  CHECK(SelfMap::identity().evidence() == SelfMap::Evidence::ByConstruction);
  CHECK_NOTHROW(SelfMap::certify(HoloFunc::scale(0.5, z1 + z2), HoloFunc::scale(0.5, z1 - z2)));
  CHECK_NOTHROW(SelfMap::certify(HoloFunc::blaschke(DiskPoint(0.3), 1), z1 * z2));
  CHECK_NOTHROW(SelfMap::certify(HoloFunc::scale(cplx(0.0, 1.0), z2), HoloFunc::constant(0.0)));
  CHECK_NOTHROW(SelfMap::certify(HoloFunc::compose(HoloFunc::blaschke(DiskPoint(0.2), 1), z1 * z2, z1), z2));
}

TEST_CASE("certification names the rejected node") {
  const HoloFunc bad = HoloFunc::scale(2.0, z1);
  try {
    SelfMap::certify(z1 * bad, z2);
    FAIL("expected rejection");
  } catch (const CertificationError& e) {
    CHECK(e.offending_node() == bad.to_string());
  }
  const HoloFunc sum = z1 + z2;
  try {
    SelfMap::certify(HoloFunc::compose(z1, sum, z2), z2);
    FAIL("expected rejection");
  } catch (const CertificationError& e) {
    CHECK(e.offending_node() == sum.to_string());
  }
}

TEST_CASE("generated maps stay inside the bidisk") {
  Xoshiro256 rng = Xoshiro256::stream(22, 0);
  for (int m = 0; m < 20; ++m) {
    const SelfMap psi = gen::self_map(rng);
    for (int k = 0; k < 500; ++k) {
      const auto [a, b] = psi(BidiskPoint{sample_disk(rng, 0.5), sample_disk(rng, 0.5)});
      REQUIRE(std::abs(a) < 1.0);
      REQUIRE(std::abs(b) < 1.0);
    }
    CHECK(sup_norm_estimate(psi.psi1(), 32) <= 1.0 + 1e-12);
    CHECK(sup_norm_estimate(psi.psi2(), 32) <= 1.0 + 1e-12);
  }
}

TEST_CASE("torus grid estimate") {
  CHECK_THAT(sup_norm_estimate(z1, 8), WithinAbs(1.0, 1e-15));
  CHECK_THAT(sup_norm_estimate(HoloFunc::scale(0.5, z1 + z2), 64), WithinAbs(1.0, 1e-15));
  CHECK_THAT(sup_norm_estimate(HoloFunc::scale(0.5, z1), 16), WithinAbs(0.5, 1e-15));
  CHECK_THROWS(sup_norm_estimate(z1, 4));

  const SelfMap g = SelfMap::from_grid_estimate(z1 * z1, z2, 32);
  CHECK(g.evidence() == SelfMap::Evidence::GridEstimate);
  CHECK_THROWS_AS(SelfMap::from_grid_estimate(HoloFunc::scale(1.1, z1), z2, 16), CertificationError);
}

TEST_CASE("dilation") {
  const double eps = 1e-3;
  CHECK_THAT(std::abs(dilate(z1, 0.9)(1.0 - eps, 0.0) - 0.9 * (1.0 - eps)), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(dilate(z1 * z2, 0.5)(BidiskPoint{0.8, 0.8}) - 0.16), WithinAbs(0.0, 1e-15));
  CHECK_THROWS(dilate(z1, 1.0));

  // Lipschitz bound 2 for z1*z2 on the closed bidisk
  const HoloFunc f = z1 * z2;
  for (double r : {0.9, 0.99, 0.999}) {
    const BidiskPoint z{0.5, cplx(0.0, 0.4)};
    CHECK(std::abs(dilate(f, r)(z) - f(z)) <= 2.0 * (1.0 - r));
  }
  // bounded on the closed bidisk even for a function with a pole outside it
  const HoloFunc g = HoloFunc::blaschke(DiskPoint(0.9), 1);
  CHECK(sup_norm_estimate(dilate(g, 0.5), 16) < 1.0);
}

TEST_CASE("triplets built from a self-map") {
  const SelfMap id = SelfMap::identity();
  const Triplet t = product_triplet(id);
  CHECK(t.to_string() == "(z1, z2, z1*z2)");

  const SelfMap f0 = SelfMap::certify(z1 * z2, HoloFunc::constant(0.0));
  const Triplet tf = product_triplet(f0);
  CHECK(tf.phi3(BidiskPoint{0.4, 0.3}) == cplx(0.0));

  const SelfMap psi = SelfMap::certify(HoloFunc::scale(0.5, z1 + z2), HoloFunc::scale(0.5, z1 - z2));
  const Triplet tp = product_triplet(psi);
  Xoshiro256 rng = Xoshiro256::stream(23, 0);
  for (int k = 0; k < 50; ++k) {
    const cplx a = sample_disk(rng, 0.3), b = sample_disk(rng, 0.3);
    CHECK_THAT(std::abs(tp.phi3(a, b) - (a * a - b * b) / 4.0), WithinAbs(0.0, 1e-15));
  }

  const Triplet s = scaled_triplet(id);
  CHECK_THAT(std::abs(s.phi1(1.0 / std::numbers::sqrt2, 0.0) - 0.5), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(s.phi3(BidiskPoint{0.5, 0.5}) - 0.125), WithinAbs(0.0, 1e-16));
}

TEST_CASE("structural equality") {
  CHECK((z1 + z2).structurally_equal(z1 + z2));
  CHECK_FALSE((z1 + z2).structurally_equal(z2 + z1));
  CHECK(HoloFunc::blaschke(DiskPoint(0.3), 1).structurally_equal(HoloFunc::blaschke(DiskPoint(0.3), 1)));
}

TEST_CASE("lowering reproduces the function") {
  const HoloFunc poly = HoloFunc::scale(0.5, z1 + z2) * (z1 - z2);
  const Series s = lower(poly, 4);
  CHECK(s.tail_bound == 0.0);
  CHECK_THAT(std::abs(s.at(2, 0) - 0.5), WithinAbs(0.0, 1e-16));
  CHECK_THAT(std::abs(s.at(0, 2) + 0.5), WithinAbs(0.0, 1e-16));
  CHECK(s.at(1, 1) == cplx(0.0));

  const HoloFunc b = HoloFunc::blaschke(DiskPoint(cplx(0.3, -0.2)), 2) * z1;
  const Series sb = lower(b, 30);
  const BidiskPoint z{0.4, cplx(0.1, 0.5)};
  const double tail = sb.tail_bound;
  CHECK(tail > 0.0);
  CHECK(std::abs(sb(z.c1(), z.c2()) - b(z)) <= tail + 1e-14);

  // composition with an origin-fixing inner map
  const HoloFunc c = HoloFunc::compose(HoloFunc::blaschke(DiskPoint(0.25), 1), z1 * z2, z2);
  const Series sc = lower(c, 24);
  CHECK(std::abs(sc(0.3, 0.4) - c(0.3, 0.4)) <= 1e-12);

  // composition that cannot be lowered exactly
  const HoloFunc bad = HoloFunc::compose(HoloFunc::blaschke(DiskPoint(0.25), 1), HoloFunc::blaschke(DiskPoint(0.5), 1), z2);
  CHECK_THROWS_AS(lower(bad, 8), LoweringError);
}
