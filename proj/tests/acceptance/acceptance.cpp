// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "bidisk/bidisk.hpp"
#include "bidisk/cli.hpp"
#include "bidisk/generators.hpp"

using namespace bidisk;
using bidisk::cli::json;

namespace {

const HoloFunc z1 = HoloFunc::z1();
const HoloFunc z2 = HoloFunc::z2();
const HoloFunc zero = HoloFunc::constant(0.0);

struct Result {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

SearchConfig config(std::uint64_t seed, int trials = 200) {
  SearchConfig c;
  c.seed = seed;
  c.trials = trials;
  return c;
}

std::vector<BidiskPoint> biased_points(std::uint64_t seed, int n) {
  Xoshiro256 rng = Xoshiro256::stream(seed, 0);
  std::vector<BidiskPoint> pts;
  for (int i = 0; i < n; ++i) {
    const cplx a = sample_disk(rng, 0.3), b = sample_disk(rng, 0.3);
    pts.emplace_back(a, b);
  }
  return pts;
}

SubmoduleSpec blaschke_spec() {
  SubmoduleSpec s;
  s.zeros1 = {DiskPoint(0.3)};
  s.zeros2 = {DiskPoint(cplx(0.0, -0.2))};
  return s;
}

Result ac1() {
  Result r;
  const MetricGaps g = metric_sweep(1, 10000, 0.3, 10);
  r.require(g.symmetry.max <= 1e-14, "symmetry " + fmt(g.symmetry.max));
  r.require(g.triangle.max <= 1e-12, "triangle " + fmt(g.triangle.max));
  r.require(g.product_identity.max <= 1e-13, "identity " + fmt(g.product_identity.max));
  r.require(g.invariance.max <= 1e-12, "invariance " + fmt(g.invariance.max));
  r.detail = r.detail.empty() ? "max invariance gap " + fmt(g.invariance.max) : r.detail;
  return r;
}

Result ac2() {
  Result r;
  Xoshiro256 rng = Xoshiro256::stream(2, 0);
  double worst = -1.0;
  for (int m = 0; m < 50; ++m) {
    const SelfMap psi = gen::self_map(rng);
    const double g = schwarz_pick_sweep(psi, SchwarzMode::General, 1000, 100 + m).gap.max;
    worst = std::max(worst, g);
    r.require(g <= 1e-12, psi.to_string() + " gap " + fmt(g));
  }
  if (r.ok) r.detail = "max gap " + fmt(worst);
  return r;
}

Result ac3() {
  Result r;
  Xoshiro256 rng = Xoshiro256::stream(3, 0);
  double worst = -1.0;
  for (int m = 0; m < 20; ++m) {
    const SelfMap psi = gen::tensor_self_map(rng);
    const double g = schwarz_pick_sweep(psi, SchwarzMode::QClass, 1000, 300 + m).gap.max;
    worst = std::max(worst, g);
    r.require(g <= 1e-12, psi.to_string() + " gap " + fmt(g));
    const Certificate c = violation_search(product_triplet(psi), TripletClass::S, config(400 + m));
    r.require(!c.violated(), psi.to_string() + " S violation " + fmt(c.min_eigenvalue));
  }
  if (r.ok) r.detail = "max gap " + fmt(worst);
  return r;
}

Result ac4() {
  Result r;
  const Triplet identity = product_triplet(SelfMap::identity());
  const Triplet scaled = scaled_triplet(SelfMap::identity());
  for (const auto& [name, t] : {std::pair{"product", identity}, std::pair{"scaled", scaled}}) {
    const Certificate c = violation_search(t, TripletClass::S, config(4));
    r.require(!c.violated() && c.min_eigenvalue >= -1e-9, std::string(name) + " min " + fmt(c.min_eigenvalue));
  }
  Xoshiro256 rng = Xoshiro256::stream(4, 0);
  for (int m = 0; m < 10; ++m) {
    const SelfMap psi = gen::self_map(rng);
    const Certificate c = violation_search(scaled_triplet(psi), TripletClass::S, config(40 + m));
    r.require(!c.violated() && c.min_eigenvalue >= -1e-9, psi.to_string() + " scaled min " + fmt(c.min_eigenvalue));
  }
  const Certificate v = membership_check(parse_triplet("(sqrt2*z1, 0, 0)"), TripletClass::Q, {BidiskPoint{0.9, 0.0}});
  r.require(v.violated(), "violator not certified");
  r.require(std::abs(v.min_eigenvalue - (1.0 - 1.62) / 0.19) <= 1e-6, "violator min " + fmt(v.min_eigenvalue));
  if (r.ok) r.detail = "violator min " + std::to_string(v.min_eigenvalue);
  return r;
}

Result ac5() {
  Result r;
  Xoshiro256 rng = Xoshiro256::stream(5, 0);
  for (int m = 0; m < 10; ++m) {
    const Triplet t = product_triplet(gen::tensor_self_map(rng));
    const SelfMap psi = gen::tensor_self_map(rng);
    const Certificate c = violation_search(compose_triplet(t, psi), TripletClass::S, config(500 + m));
    r.require(!c.violated(), psi.to_string() + " min " + fmt(c.min_eigenvalue));
  }
  return r;
}

Result ac6() {
  Result r;
  const auto pts = biased_points(6, 1000);
  Xoshiro256 rng = Xoshiro256::stream(6, 1);
  double worst = -1.0;
  for (int m = 0; m < 50; ++m) {
    const SelfMap psi = gen::origin_fixing_self_map(rng);
    const double g = schwarz_diag_check(product_triplet(psi), pts, 2.0).max;
    worst = std::max(worst, g);
    r.require(g <= 1e-12, psi.to_string() + " gap " + fmt(g));
  }
  const double two_sided = schwarz_diag_check(Triplet{z1 * z2, zero, zero}, pts, 1.0).max;
  r.require(two_sided <= 1e-12, "z1*z2 two-sided " + fmt(two_sided));
  if (r.ok) r.detail = "max gap " + fmt(worst);
  return r;
}

Result ac7() {
  Result r;
  SubmoduleSpec monomial;
  monomial.zeros1 = {DiskPoint(0.0)};
  monomial.zeros2 = {DiskPoint(0.0)};
  const TruncOp d = defect_op(product_triplet(SelfMap::identity()), 8);
  const TruncOp p = proj_submodule(monomial, 8);
  const double proj_gap = max_abs_entry(interior_block(d, 7) - interior_block(p, 7));
  r.require(proj_gap <= 1e-12, "projection identity " + fmt(proj_gap));

  const SubmoduleSpec s = blaschke_spec();
  const int interior = 16 - s.degree1() - s.degree2() - 1;
  TruncOp diff = core_op(proj_submodule(s, 16));
  diff.m = interior_block(diff, interior) - interior_block(rank3_core(s, 16), interior);
  diff.N = interior;
  const double agreement = op_norm(diff);
  r.require(agreement <= 1e-8, "agreement " + fmt(agreement));

  const auto samples = cli::detail::identity_samples(0);
  std::vector<double> dev;
  for (int N : {12, 16, 20}) {
    double worst = 0.0;
    for (const auto& lambda : cli::detail::identity_centers()) worst = std::max(worst, kernel_identity_check(s, lambda, N, samples));
    dev.push_back(worst);
  }
  r.require(dev[2] <= 1e-4, "kernel identity at N=20 " + fmt(dev[2]));
  r.require(dev[0] > dev[1] && dev[1] > dev[2], "kernel identity not decreasing " + fmt(dev[0]) + " " + fmt(dev[1]) + " " + fmt(dev[2]));

  Xoshiro256 rng = Xoshiro256::stream(7, 0);
  for (int m = 0; m < 20; ++m) {
    const SelfMap psi = gen::self_map(rng, false);
    const double n = op_norm(defect_op(product_triplet(psi), 10));
    r.require(n >= 0.0 && n <= 2.0 + 1e-9, psi.to_string() + " norm " + fmt(n));
  }
  if (r.ok)
    r.detail = "agreement " + fmt(agreement) + ", kernel identity " + fmt(dev[0]) + " > " + fmt(dev[1]) + " > " + fmt(dev[2]);
  return r;
}

Result ac8() {
  Result r;
  const std::string example = "((z1+z2)/2, (z1-z2)/2, (z1^2-z2^2)/4)";
  const auto p = cli::run({"class-check", example, "P", "--random", "8", "--seed", "8"});
  r.require(p.exit_code == 0, "P check exit " + std::to_string(p.exit_code) + " " + p.err);

  const Triplet t = parse_triplet(example);
  for (double x : {0.5, 0.9, 0.99}) {
    const double D = phi(t, BidiskPoint{x, cplx(0.0, x)}, BidiskPoint{x, cplx(0.0, x)}).real();
    const double expected = x * x - std::pow(x, 4) / 4.0;
    r.require(std::abs(D - expected) <= 1e-12, "D at r=" + fmt(x) + " off by " + fmt(D - expected));
  }

  const auto q = cli::run({"class-check", example, "Q", "--random", "8", "--seed", "8"});
  r.require(q.exit_code == 0 || q.exit_code == 2, "Q check exit " + std::to_string(q.exit_code) + " " + q.err);
  if (!q.out.empty()) {
    const json cert = json::parse(q.out)["results"]["certificate"];
    r.detail += (r.detail.empty() ? "" : "; ") + std::string("Q search: ") + cert["verdict"].get<std::string>() +
                ", most negative eigenvalue " + fmt(cert["min_eigenvalue"].get<double>());
  }
  return r;
}

Result ac9() {
  Result r;
  const std::vector<std::vector<std::string>> commands{
      {"distance", "0.5,0.5", "0,0"},
      {"class-check", "((z1+z2)/2, (z1-z2)/2, (z1^2-z2^2)/4)", "Q", "--random", "8", "--seed", "9", "--trials", "50"},
      {"class-check", "(sqrt2*z1, 0, 0)", "Q", "--points", "0.9,0"},
      {"metric-test", "--trials", "1000", "--seed", "9"},
      {"schwarz-pick", "(z1*z2, z2)", "--pairs", "500", "--seed", "9", "--origin"},
      {"core-operator", "--q1", "0.3", "--q2", "-0.2i", "--N", "10"},
      {"diagonal", "((z1+z2)/2, (z1-z2)/2, (z1^2-z2^2)/4)", "--points", "0.5,0.5i"},
  };
  for (const auto& cmd : commands) {
    const auto first = cli::run(cmd);
    if (first.out.empty()) {
      r.require(false, cmd[0] + " produced no report: " + first.err);
      continue;
    }
    const auto replay = cli::run(json::parse(first.out)["command"].get<std::vector<std::string>>());
    r.require(cli::without_wall_time(first.out) == cli::without_wall_time(replay.out), cmd[0] + " report differs on replay");
  }
  if (r.ok) r.detail = std::to_string(commands.size()) + " reports replayed";
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    std::function<Result()> run;
    double budget_s;
  };
  const std::vector<Criterion> criteria{
      {"AC1 metric suite", ac1, 5.0},
      {"AC2 sqrt2 Schwarz-Pick bound", ac2, 30.0},
      {"AC3 Q-class contraction", ac3, 0.0},
      {"AC4 class engine soundness", ac4, 0.0},
      {"AC5 composition closure", ac5, 0.0},
      {"AC6 Schwarz lemma at the origin", ac6, 0.0},
      {"AC7 Hardy-space identities", ac7, 60.0},
      {"AC8 diagonal example", ac8, 0.0},
      {"AC9 determinism", ac9, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.ok = false;
      r.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      r.ok = false;
      r.detail += (r.detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    if (!r.ok) ++failed;
    std::printf("%s %s (%.2f s)%s%s\n", r.ok ? "PASS" : "FAIL", c.id, secs, r.detail.empty() ? "" : ": ", r.detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
