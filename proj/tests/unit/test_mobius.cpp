#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "bidisk/geometry.hpp"
#include "bidisk/mobius.hpp"
#include "bidisk/rng.hpp"

using namespace bidisk;
using Catch::Matchers::WithinAbs;

TEST_CASE("disk points reject the closed boundary") {
  CHECK_NOTHROW(DiskPoint(0.999));
  CHECK_THROWS_AS(DiskPoint(1.0), DomainError);
  CHECK_THROWS_AS(DiskPoint(cplx(0.6, 0.8)), DomainError);
  CHECK_THROWS_AS(DiskPoint(1.0 - 1e-16), DomainError);
  CHECK_THROWS_AS(DiskPoint(std::nan("")), DomainError);
}

TEST_CASE("blaschke factor values") {
  CHECK_THAT(std::abs(blaschke_eval(DiskPoint(0.0), DiskPoint(0.7)) - 0.7), WithinAbs(0.0, 1e-16));
  CHECK(std::abs(blaschke_eval(DiskPoint(0.5), DiskPoint(0.5))) == 0.0);
  CHECK_THAT(std::abs(blaschke_eval(DiskPoint(0.5), DiskPoint(0.8)) - 0.5), WithinAbs(0.0, 1e-15));
}

TEST_CASE("blaschke factor is inner") {
  Xoshiro256 rng = Xoshiro256::stream(11, 0);
  for (int k = 0; k < 1000; ++k) {
    const cplx w = sample_disk(rng, 0.3);
    const cplx z = sample_disk(rng, 0.3);
    CHECK(std::abs(blaschke_eval(w, z)) < 1.0);
    const cplx u = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    CHECK_THAT(std::abs(blaschke_eval(w, u)), WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("one-variable distance") {
  CHECK(dist1(DiskPoint(0.5), DiskPoint(0.5)) == 0.0);
  CHECK_THAT(dist1(DiskPoint(0.5), DiskPoint(-0.5)), WithinAbs(0.8, 1e-15));

  Xoshiro256 rng = Xoshiro256::stream(12, 0);
  for (int k = 0; k < 1000; ++k) {
    const DiskPoint z(sample_disk(rng, 0.3)), w(sample_disk(rng, 0.3));
    CHECK_THAT(dist1(z, w) - dist1(w, z), WithinAbs(0.0, 1e-14));
    const double r = z.modulus(), s = w.modulus();
    CHECK(dist1(z, w) <= (r + s) / (1.0 + r * s) + 1e-12);
    // complement formula agrees with 1 - d^2 away from the boundary
    const double d = dist1(z, w);
    if (d < 0.9) CHECK_THAT(dist1_complement_sq(z.value(), w.value()), WithinAbs(1.0 - d * d, 1e-13));
  }
}

TEST_CASE("automorphism application") {
  const BidiskPoint p{0.3, cplx(0.0, -0.2)};
  CHECK(aut_apply(BidiskAutomorphism::identity(), p) == p);

  const auto s = aut_apply(BidiskAutomorphism::swap_only(), BidiskPoint{0.3, 0.5});
  CHECK(s.c1() == cplx(0.5));
  CHECK(s.c2() == cplx(0.3));

  BidiskAutomorphism g;
  g.w1 = DiskPoint(0.5);
  const auto q = aut_apply(g, BidiskPoint{0.8, 0.0});
  CHECK_THAT(std::abs(q.c1() - 0.5), WithinAbs(0.0, 1e-15));
  CHECK(q.c2() == cplx(0.0));
}

TEST_CASE("automorphism inverse") {
  CHECK(aut_inverse(BidiskAutomorphism::identity()).swap == false);
  const auto si = aut_inverse(BidiskAutomorphism::swap_only());
  CHECK(si.swap);
  CHECK(si.w1 == DiskPoint{});
  CHECK(si.theta1 == 0.0);

  BidiskAutomorphism g;
  g.w1 = DiskPoint(0.5);
  const auto back = aut_apply(aut_inverse(g), BidiskPoint{-0.5, 0.0});
  CHECK_THAT(std::abs(back.c1()), WithinAbs(0.0, 1e-15));
  CHECK_THAT(std::abs(back.c2()), WithinAbs(0.0, 1e-15));
}

TEST_CASE("automorphism group law on random points") {
  Xoshiro256 rng = Xoshiro256::stream(13, 0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const BidiskAutomorphism g = sample_automorphism(rng);
    const BidiskAutomorphism h = aut_inverse(g);
    for (int j = 0; j < 100; ++j) {
      const BidiskPoint z{sample_disk(rng, 0.0), sample_disk(rng, 0.0)};
      const auto gz = aut_apply(g, z);
      const auto back = aut_apply(h, gz);
      worst = std::max({worst, std::abs(back.c1() - z.c1()), std::abs(back.c2() - z.c2())});
      const auto fwd = aut_apply(g, aut_apply(h, z));
      worst = std::max({worst, std::abs(fwd.c1() - z.c1()), std::abs(fwd.c2() - z.c2())});
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("sampler is deterministic and stays in the disk") {
  Xoshiro256 a = Xoshiro256::stream(5, 3), b = Xoshiro256::stream(5, 3), c = Xoshiro256::stream(5, 4);
  CHECK(a() == b());
  CHECK(a() != c());
  Xoshiro256 rng = Xoshiro256::stream(1, 0);
  int near_boundary = 0;
  for (int k = 0; k < 10000; ++k) {
    const cplx z = sample_disk(rng, 0.3);
    REQUIRE(std::abs(z) < 1.0);
    if (std::abs(z) >= 0.9 - 1e-12) ++near_boundary;
  }
  // 30% resampled to the boundary shell plus about 19% of area-uniform draws
  CHECK(near_boundary > 4000);
  CHECK(near_boundary < 5800);
}
