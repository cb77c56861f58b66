#pragma once

// Command-line front end. `run` takes the arguments after the program name
// and returns the exit code together with the text meant for stdout and
// stderr, so a report's embedded command can be replayed in-process.
//
// Exit codes: 0 ran and every asserted gap is within tolerance, 2 ran and
// found a violation or exceedance, 1 usage or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "bidisk/classes.hpp"
#include "bidisk/funcspace.hpp"
#include "bidisk/geometry.hpp"
#include "bidisk/grammar.hpp"
#include "bidisk/hardy.hpp"
#include "bidisk/kernel.hpp"
#include "bidisk/psd.hpp"

namespace bidisk::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "bidisk-report/1";

// Centralized defaults, echoed into every report.
struct Defaults {
  static constexpr double tol = kDefaultPsdTol;
  static constexpr int N = 16;
  static constexpr int trials = 200;
  static constexpr int pairs = 1000;
  static constexpr double boundary_bias = 0.3;
  static constexpr std::uint64_t seed = 0;
  static constexpr int metric_trials = 200;
  static constexpr int automorphisms = 10;
  static constexpr double gap_tol = 1e-12;
  static constexpr double symmetry_tol = 1e-14;
  static constexpr double product_identity_tol = 1e-13;
  static constexpr double agreement_tol = 1e-8;
  static constexpr double kernel_identity_tol = 1e-4;
};

enum ExitCode : int { kOk = 0, kUsage = 1, kViolation = 2 };

struct Outcome {
  int exit_code = kOk;
  std::string out;
  std::string err;
};

inline json point_json(const BidiskPoint& z) {
  return json::array({z.c1().real(), z.c1().imag(), z.c2().real(), z.c2().imag()});
}

inline json points_json(const std::vector<BidiskPoint>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(point_json(p));
  return a;
}

inline json certificate_json(const Certificate& c, const Triplet& t) {
  json j;
  j["triplet"] = c.triplet;
  j["class"] = to_string(c.cls);
  j["verdict"] = to_string(c.verdict);
  j["kernel_kind"] = to_string(c.kind);
  j["min_eigenvalue"] = c.min_eigenvalue;
  j["matrix_scale"] = c.scale;
  j["threshold"] = -c.tol * std::max(1.0, c.scale);
  j["replayed_min_eigenvalue"] = replay_min_eigenvalue(t, c);
  j["matrix_size"] = c.matrix_size;
  j["witness_points"] = points_json(c.witness_points);
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["best_trial"] = c.best_trial;
  return j;
}

inline json gap_json(double value, double tol) {
  return json{{"max", value}, {"tol", tol}, {"within_tol", value <= tol}};
}

/// Serialized report with wall_time removed, for byte comparisons.
inline std::string without_wall_time(const std::string& report) {
  json j = json::parse(report);
  j.erase("wall_time");
  return j.dump(2);
}

namespace detail {

struct Context {
  std::vector<std::string> argv;
  std::string command;
  json config = json::object();
  json results = json::object();
  bool violation = false;
  std::string out_path;
  std::ostringstream log;
};

inline std::vector<BidiskPoint> parse_points(const std::vector<std::string>& items) {
  std::vector<BidiskPoint> pts;
  for (const auto& s : items) pts.push_back(parse_point(s));
  return pts;
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

inline void distance(Context& cx, const std::string& zs, const std::string& ws) {
  const BidiskPoint z = parse_point(zs), w = parse_point(ws);
  const double d = dist(z, w), r = dist_radical(z, w);
  cx.config["z"] = point_json(z);
  cx.config["w"] = point_json(w);
  cx.results["d"] = d;
  cx.results["product_form"] = d;
  cx.results["radical_form"] = r;
  cx.results["route_difference"] = std::abs(d - r);
  cx.results["d1"] = dist1(z.z1, w.z1);
  cx.results["d2"] = dist1(z.z2, w.z2);
  cx.log << "d = " << json(d).dump() << '\n';
}

struct ClassArgs {
  std::string triplet, cls;
  std::vector<std::string> points;
  std::string points_file;
  int random = 0;
  int trials = Defaults::trials;
  std::uint64_t seed = Defaults::seed;
  double tol = Defaults::tol;
  double bias = Defaults::boundary_bias;
  unsigned threads = 0;
};

inline void class_check(Context& cx, const ClassArgs& a) {
  const Triplet t = parse_triplet(a.triplet);
  const TripletClass cls = parse_class(a.cls);
  const int sources = (a.random > 0) + !a.points.empty() + !a.points_file.empty();
  if (sources != 1) throw std::invalid_argument("give exactly one of --random, --points, --points-file");

  cx.config["triplet"] = t.to_string();
  cx.config["class"] = to_string(cls);
  cx.config["tol"] = a.tol;
  Certificate cert;
  if (a.random > 0) {
    SearchConfig sc;
    sc.seed = a.seed;
    sc.trials = a.trials;
    sc.n_points = a.random;
    sc.boundary_bias = a.bias;
    sc.tol = a.tol;
    sc.threads = a.threads;
    cx.config["source"] = "random";
    cx.config["n_points"] = a.random;
    cx.config["trials"] = a.trials;
    cx.config["seed"] = a.seed;
    cx.config["boundary_bias"] = a.bias;
    cert = violation_search(t, cls, sc);
  } else {
    const auto pts = a.points_file.empty() ? parse_points(a.points) : read_points_csv(a.points_file);
    cx.config["source"] = a.points_file.empty() ? "points" : "points_file";
    cx.config["points"] = points_json(pts);
    cert = membership_check(t, cls, pts, a.tol);
  }
  cx.results["certificate"] = certificate_json(cert, t);
  cx.violation = cert.violated();
  cx.log << to_string(cert.verdict) << " (min eigenvalue " << json(cert.min_eigenvalue).dump() << ", kind "
         << to_string(cert.kind) << ")\n";
}

struct MetricArgs {
  int trials = Defaults::metric_trials;
  std::uint64_t seed = Defaults::seed;
  double bias = Defaults::boundary_bias;
  int automorphisms = Defaults::automorphisms;
  unsigned threads = 0;
};

inline void metric_test(Context& cx, const MetricArgs& a) {
  if (a.trials < 1) throw std::invalid_argument("--trials must be at least 1");
  cx.config["trials"] = a.trials;
  cx.config["seed"] = a.seed;
  cx.config["boundary_bias"] = a.bias;
  cx.config["automorphisms"] = a.automorphisms;
  const MetricGaps g = metric_sweep(a.seed, static_cast<std::size_t>(a.trials), a.bias, a.automorphisms, a.threads);

  auto stat = [&](const GapStat& s, double tol) {
    json j = gap_json(s.max, tol);
    const auto tri = metric_triple(a.seed, s.argmax, a.bias);
    j["argmax_trial"] = s.argmax;
    j["argmax_points"] = points_json({tri.z, tri.w, tri.v});
    cx.violation = cx.violation || !(s.max <= tol);
    return j;
  };
  cx.results["symmetry"] = stat(g.symmetry, Defaults::symmetry_tol);
  cx.results["triangle"] = stat(g.triangle, Defaults::gap_tol);
  cx.results["product_identity"] = stat(g.product_identity, Defaults::product_identity_tol);
  cx.results["automorphism_invariance"] = stat(g.invariance, Defaults::gap_tol);
  cx.results["radical_agreement"] = stat(g.radical_agreement, Defaults::gap_tol);
  cx.results["max_distance"] = g.max_distance;
  cx.log << (cx.violation ? "gap exceeded" : "all gaps within tolerance") << '\n';
}

struct SchwarzArgs {
  std::string map;
  std::string mode = "general";
  int pairs = Defaults::pairs;
  std::uint64_t seed = Defaults::seed;
  double bias = Defaults::boundary_bias;
  double tol = Defaults::gap_tol;
  bool origin = false;
  std::string factor = "2";
  int N = Defaults::N;
  std::string csv;
  int trials = Defaults::trials;
  unsigned threads = 0;
};

inline void schwarz_pick(Context& cx, const SchwarzArgs& a) {
  if (a.pairs < 1) throw std::invalid_argument("--pairs must be at least 1");
  if (a.mode != "general" && a.mode != "q_class") throw std::invalid_argument("--mode must be general or q_class");
  if (a.factor != "2" && a.factor != "truncated") throw std::invalid_argument("--factor must be 2 or truncated");
  const SelfMap psi = parse_self_map(a.map);
  const SchwarzMode mode = a.mode == "general" ? SchwarzMode::General : SchwarzMode::QClass;

  cx.config["self_map"] = psi.to_string();
  cx.config["mode"] = to_string(mode);
  cx.config["constant"] = schwarz_constant(mode);
  cx.config["pairs"] = a.pairs;
  cx.config["seed"] = a.seed;
  cx.config["boundary_bias"] = a.bias;
  cx.config["gap_tol"] = a.tol;
  cx.config["origin"] = a.origin;

  const SchwarzSweep sw = schwarz_pick_sweep(psi, mode, static_cast<std::size_t>(a.pairs), a.seed, a.bias, a.threads);
  json g = gap_json(sw.gap.max, a.tol);
  g["argmax_pair"] = a.pairs > 0 ? json(sw.gap.argmax) : json(nullptr);
  g["argmax_points"] = points_json({sw.worst.z, sw.worst.w});
  cx.results["schwarz_pick"] = g;
  cx.violation = !(sw.gap.max <= a.tol);

  if (mode == SchwarzMode::QClass) {
    SearchConfig sc;
    sc.seed = a.seed;
    sc.trials = a.trials;
    sc.boundary_bias = a.bias;
    sc.threads = a.threads;
    cx.config["precondition_trials"] = a.trials;
    const Triplet pt = product_triplet(psi);
    cx.results["q_precondition"] = certificate_json(violation_search(pt, TripletClass::Q, sc), pt);
    cx.results["near_equality_hint"] = sw.near_equality;
  }

  if (a.origin) {
    const Triplet pt = product_triplet(psi);
    double factor = 2.0;
    cx.config["factor"] = a.factor;
    if (a.factor == "truncated") {
      cx.config["N"] = a.N;
      factor = op_norm(defect_op(pt, a.N));
    }
    std::vector<BidiskPoint> pts;
    for (const auto& r : sw.rows) {
      pts.push_back(r.pair.z);
      pts.push_back(r.pair.w);
    }
    const GapStat d = schwarz_diag_check(pt, pts, factor);
    json j = gap_json(d.max, a.tol);
    j["factor"] = factor;
    j["argmax_point"] = point_json(pts[d.argmax]);
    cx.results["origin_diagonal"] = j;
    cx.violation = cx.violation || !(d.max <= a.tol);
  }

  if (!a.csv.empty()) {
    std::ostringstream os;
    write_sweep_csv(os, sw.rows);
    write_file(a.csv, os.str());
    cx.config["csv"] = a.csv;
  }
  cx.log << "max gap " << json(sw.gap.max).dump() << '\n';
}

struct CoreArgs {
  std::vector<std::string> q1{"0"}, q2{"0"};
  int N = Defaults::N;
  std::string export_prefix;
  double agreement_tol = Defaults::agreement_tol;
  double identity_tol = Defaults::kernel_identity_tol;
  std::uint64_t seed = Defaults::seed;
};

/// Default sample region for the reproducing identity: a few kernel centers
/// and 32 seeded points, all with coordinates of modulus at most 0.5.
inline std::vector<BidiskPoint> identity_samples(std::uint64_t seed) {
  Xoshiro256 rng = Xoshiro256::stream(seed, 41);
  std::vector<BidiskPoint> pts;
  for (int k = 0; k < 32; ++k) {
    const cplx a = sample_disk_within(rng, kKernelIdentityRadius), b = sample_disk_within(rng, kKernelIdentityRadius);
    pts.emplace_back(a, b);
  }
  return pts;
}

inline std::vector<BidiskPoint> identity_centers() {
  return {BidiskPoint{0.0, 0.0}, BidiskPoint{0.3, 0.2}, BidiskPoint{cplx(0.0, 0.5), -0.5},
          BidiskPoint{cplx(-0.25, 0.25), cplx(0.1, -0.4)}};
}

inline void core_operator(Context& cx, const CoreArgs& a) {
  bidisk::detail::check_degree(a.N);
  SubmoduleSpec s;
  for (const auto& z : a.q1) s.zeros1.emplace_back(parse_complex(z));
  for (const auto& z : a.q2) s.zeros2.emplace_back(parse_complex(z));
  s.validate();

  json z1 = json::array(), z2 = json::array();
  for (const auto& z : s.zeros1) z1.push_back({z.value().real(), z.value().imag()});
  for (const auto& z : s.zeros2) z2.push_back({z.value().real(), z.value().imag()});
  cx.config["q1_zeros"] = z1;
  cx.config["q2_zeros"] = z2;
  cx.config["N"] = a.N;
  cx.config["seed"] = a.seed;
  cx.config["agreement_tol"] = a.agreement_tol;
  cx.config["identity_tol"] = a.identity_tol;

  const TruncOp p = proj_submodule(s, a.N);
  const TruncOp core = core_op(p);
  const TruncOp r3 = rank3_core(s, a.N);
  const int interior = a.N - s.degree1() - s.degree2() - 1;
  double agreement = 0.0;
  if (interior >= 0) {
    TruncOp diff = core;
    diff.m = interior_block(core, interior) - interior_block(r3, interior);
    diff.N = interior;
    agreement = op_norm(diff);
  }
  const double full_agreement = max_abs_entry(core.m - r3.m);
  const double idempotence = max_abs_entry(p.m * p.m - p.m);

  double identity_dev = 0.0;
  const auto samples = identity_samples(a.seed);
  for (const auto& lambda : identity_centers()) identity_dev = std::max(identity_dev, kernel_identity_check(s, lambda, a.N, samples));

  cx.results["interior_degree"] = interior;
  cx.results["agreement"] = gap_json(agreement, a.agreement_tol);
  cx.results["full_block_max_entry_difference"] = full_agreement;
  cx.results["projection_idempotence"] = idempotence;
  cx.results["projection_trace"] = p.m.trace().real();
  cx.results["kernel_identity_deviation"] = gap_json(identity_dev, a.identity_tol);
  cx.results["tail_bound"] = r3.tail_bound;
  cx.violation = !(agreement <= a.agreement_tol) || !(identity_dev <= a.identity_tol);

  if (!a.export_prefix.empty()) {
    for (const auto& [name, op] : {std::pair<const char*, const TruncOp*>{"projection", &p}, {"core", &core}, {"rank3", &r3}}) {
      std::ostringstream os;
      write_matrix(os, op->m);
      const std::string path = a.export_prefix + "_" + name + ".txt";
      write_file(path, os.str());
    }
    cx.config["export_prefix"] = a.export_prefix;
  }
  cx.log << "agreement " << json(agreement).dump() << ", kernel identity deviation " << json(identity_dev).dump() << '\n';
}

inline void diagonal(Context& cx, const std::string& triplet, const std::vector<std::string>& items) {
  const Triplet t = parse_triplet(triplet);
  const auto pts = parse_points(items);
  cx.config["triplet"] = t.to_string();
  cx.config["points"] = points_json(pts);
  json rows = json::array();
  for (const auto& z : pts) {
    const double bound = std::norm(z.c1()) + std::norm(z.c2()) - std::norm(z.c1() * z.c2());
    rows.push_back(json{{"point", point_json(z)}, {"D", phi(t, z, z).real()}, {"bound", bound}});
  }
  cx.results["diagonal"] = rows;
}

}  // namespace detail

inline Outcome run(const std::vector<std::string>& args) {
  const auto start = std::chrono::steady_clock::now();
  Outcome oc;
  detail::Context cx;
  cx.argv = args;

  CLI::App app{"Indefinite Schwarz-Pick toolkit for the bidisk", "bidisk"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);
  std::string out_path;
  unsigned threads = 0;
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  app.add_option("--threads", threads, "Worker threads (0: hardware concurrency); results do not depend on it");

  std::string zs, ws;
  auto* dist_cmd = app.add_subcommand("distance", "Pseudo-hyperbolic distance between two points");
  dist_cmd->add_option("z", zs, "First point as z1,z2")->required();
  dist_cmd->add_option("w", ws, "Second point as w1,w2")->required();

  detail::ClassArgs ca;
  auto* class_cmd = app.add_subcommand("class-check", "Pick-matrix evidence for class P, Q or S");
  class_cmd->add_option("triplet", ca.triplet, "Triplet (phi1, phi2, phi3)")->required();
  class_cmd->add_option("class", ca.cls, "P, Q or S")->required();
  class_cmd->add_option("--points", ca.points, "Points z1,z2");
  class_cmd->add_option("--points-file", ca.points_file, "CSV with rows re1,im1,re2,im2");
  class_cmd->add_option("--random", ca.random, "Random search with this many points per set");
  class_cmd->add_option("--trials", ca.trials, "Random point sets")->capture_default_str();
  class_cmd->add_option("--seed", ca.seed)->capture_default_str();
  class_cmd->add_option("--tol", ca.tol, "Relative PSD tolerance")->capture_default_str();
  class_cmd->add_option("--bias", ca.bias, "Probability of a near-boundary coordinate")->capture_default_str();

  detail::MetricArgs ma;
  auto* metric_cmd = app.add_subcommand("metric-test", "Metric axiom sweep");
  metric_cmd->add_option("--trials", ma.trials)->capture_default_str();
  metric_cmd->add_option("--seed", ma.seed)->capture_default_str();
  metric_cmd->add_option("--bias", ma.bias)->capture_default_str();
  metric_cmd->add_option("--automorphisms", ma.automorphisms)->capture_default_str();

  detail::SchwarzArgs sa;
  auto* sp_cmd = app.add_subcommand("schwarz-pick", "Schwarz-Pick sweep for a self-map");
  sp_cmd->add_option("map", sa.map, "Self-map (psi1, psi2)")->required();
  sp_cmd->add_option("--mode", sa.mode, "general or q_class")->capture_default_str();
  sp_cmd->add_option("--pairs", sa.pairs)->capture_default_str();
  sp_cmd->add_option("--seed", sa.seed)->capture_default_str();
  sp_cmd->add_option("--bias", sa.bias)->capture_default_str();
  sp_cmd->add_option("--tol", sa.tol, "Allowed gap")->capture_default_str();
  sp_cmd->add_flag("--origin", sa.origin, "Also run the diagonal check at the origin");
  sp_cmd->add_option("--factor", sa.factor, "2 or truncated")->capture_default_str();
  sp_cmd->add_option("--N", sa.N, "Truncation degree for --factor truncated")->capture_default_str();
  sp_cmd->add_option("--trials", sa.trials, "Q-precondition search trials")->capture_default_str();
  sp_cmd->add_option("--csv", sa.csv, "Dump every pair");

  detail::CoreArgs ka;
  auto* core_cmd = app.add_subcommand("core-operator", "Core operator of q1 H2 + q2 H2");
  core_cmd->add_option("--q1", ka.q1, "Zeros of q1")->capture_default_str();
  core_cmd->add_option("--q2", ka.q2, "Zeros of q2")->capture_default_str();
  core_cmd->add_option("--N", ka.N)->capture_default_str();
  core_cmd->add_option("--seed", ka.seed)->capture_default_str();
  core_cmd->add_option("--export", ka.export_prefix, "Write PREFIX_{projection,core,rank3}.txt");
  core_cmd->add_option("--agreement-tol", ka.agreement_tol)->capture_default_str();
  core_cmd->add_option("--identity-tol", ka.identity_tol)->capture_default_str();

  std::string diag_triplet;
  std::vector<std::string> diag_points;
  auto* diag_cmd = app.add_subcommand("diagonal", "Diagonal kernel value D(z) of a triplet");
  diag_cmd->add_option("triplet", diag_triplet)->required();
  diag_cmd->add_option("--points", diag_points)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    oc.out = app.help();
    return oc;
  } catch (const CLI::CallForVersion&) {
    oc.out = std::string(kToolVersion) + "\n";
    return oc;
  } catch (const CLI::ParseError& e) {
    oc.exit_code = kUsage;
    oc.err = std::string(e.what()) + "\n";
    return oc;
  }

  ma.threads = ca.threads = sa.threads = threads;
  try {
    if (*dist_cmd) {
      cx.command = "distance";
      detail::distance(cx, zs, ws);
    } else if (*class_cmd) {
      cx.command = "class-check";
      detail::class_check(cx, ca);
    } else if (*metric_cmd) {
      cx.command = "metric-test";
      detail::metric_test(cx, ma);
    } else if (*sp_cmd) {
      cx.command = "schwarz-pick";
      detail::schwarz_pick(cx, sa);
    } else if (*core_cmd) {
      cx.command = "core-operator";
      detail::core_operator(cx, ka);
    } else {
      cx.command = "diagonal";
      detail::diagonal(cx, diag_triplet, diag_points);
    }
  } catch (const CertificationError& e) {
    oc.exit_code = kUsage;
    oc.err = std::string("certification failed: ") + e.what() + "\nrejected node: " + e.offending_node() + "\n";
    return oc;
  } catch (const std::exception& e) {
    oc.exit_code = kUsage;
    oc.err = std::string("error: ") + e.what() + "\n";
    return oc;
  }

  json report;
  report["schema"] = kReportSchema;
  report["tool_version"] = kToolVersion;
  report["command"] = cx.argv;
  report["subcommand"] = cx.command;
  report["config"] = cx.config;
  report["results"] = cx.results;
  report["status"] = cx.violation ? "violation" : "ok";
  report["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string text = report.dump(2) + "\n";

  oc.exit_code = cx.violation ? kViolation : kOk;
  if (out_path.empty()) {
    oc.out = text;
  } else {
    try {
      detail::write_file(out_path, text);
    } catch (const std::exception& e) {
      oc.exit_code = kUsage;
      oc.err = std::string("error: ") + e.what() + "\n";
      return oc;
    }
    oc.out = cx.log.str();
  }
  return oc;
}

}  // namespace bidisk::cli
