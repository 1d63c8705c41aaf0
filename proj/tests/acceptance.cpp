// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Tolerances and budgets are pinned here on purpose; loosening them is a
// behavior change, not a cleanup.

#include "polarpoly/eval.hpp"
#include "polarpoly/fit.hpp"
#include "polarpoly/gradient.hpp"
#include "polarpoly/io.hpp"
#include "polarpoly/loss.hpp"
#include "polarpoly/resample.hpp"
#include "polarpoly/shapes.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace polarpoly;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return std::string(buf);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CmdResult {
  int exit_code = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  const std::string out_path = "/tmp/polarpoly_acc_out.txt";
  const std::string cmd = std::string(POLARPOLY_CLI_PATH) + " " + args + " > " + out_path +
                          " 2> /tmp/polarpoly_acc_err.txt";
  const int status = std::system(cmd.c_str());
  return CmdResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out_path)};
}

double fit_raster_iou(const CartesianPolygon& target, int k, FitAngleMode mode, int iters) {
  FitConfig cfg;
  cfg.k = k;
  cfg.m = 180;
  cfg.max_iters = iters;
  cfg.angle_mode = mode;
  const FitResult res = fit(target, cfg);
  return polygon_iou(to_cartesian(res.polygon), target, 512);
}

// Sums matrix entries over a pair set in row-major pair order, so two equal
// pair sets always produce bit-identical totals.
double pair_total(const Eigen::MatrixXd& a, std::vector<std::pair<int, int>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  double s = 0.0;
  for (const auto& [r, c] : pairs) s += a(r, c);
  return s;
}

// Brute-force optimum of the assignment problem: the IoU-maximizing pair set,
// found by permuting the longer side.
std::vector<std::pair<int, int>> best_assignment(const Eigen::MatrixXd& iou) {
  const int n = static_cast<int>(iou.rows());
  const int m = static_cast<int>(iou.cols());
  if (n > m) {
    auto flipped = best_assignment(iou.transpose());
    for (auto& [r, c] : flipped) std::swap(r, c);
    return flipped;
  }
  std::vector<int> cols(m);
  std::iota(cols.begin(), cols.end(), 0);
  std::vector<int> best_cols;
  double best = -1.0;
  do {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += iou(i, cols[i]);
    if (s > best) {
      best = s;
      best_cols = cols;
    }
  } while (std::next_permutation(cols.begin(), cols.end()));
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n; ++i) out.emplace_back(i, best_cols[i]);
  return out;
}

// ---------------------------------------------------------------------------

void criteria_1_and_2() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> ua(0.0, kTwoPi);
  double max_vector_oracle = 0.0;     // all 1000 instances
  double max_triangle_vector = 0.0;   // convex subset
  double max_triangle_oracle = 0.0;   // convex subset
  int convex_count = 0;
  const int m = 128;
  for (int t = 0; t < 1000; ++t) {
    const int k = 3 + static_cast<int>(rng() % 38);
    const bool concave = t % 2 == 0;
    const PolarPolygond polar = random_star_polygon(rng, k, concave);
    const CartesianPolygon cart = to_cartesian(polar);
    const double phase = ua(rng);
    const RadialProfiled vec = resample_vector(cart, polar.origin(), m, phase);
    const RadialProfiled lu = resample_oracle(cart, polar.origin(), m, phase);
    for (Eigen::Index j = 0; j < m; ++j)
      max_vector_oracle =
          std::max(max_vector_oracle, std::fabs(vec.radii()[j] - lu.radii()[j]));
    if (!concave) {
      ++convex_count;
      const RadialProfiled tri = resample_triangle(polar, m, phase);
      for (Eigen::Index j = 0; j < m; ++j) {
        max_triangle_vector =
            std::max(max_triangle_vector, std::fabs(tri.radii()[j] - vec.radii()[j]));
        max_triangle_oracle =
            std::max(max_triangle_oracle, std::fabs(tri.radii()[j] - lu.radii()[j]));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  report(1,
         max_vector_oracle <= 1e-9 && max_triangle_oracle <= 1e-9 && elapsed < 30.0,
         fmt("1000 star polygons, k in [3,40], m=%d: max |vector-oracle| %.3g (all), "
             "max |triangle-oracle| %.3g (%d convex), %.1fs (budget 30s)",
             m, max_vector_oracle, max_triangle_oracle, convex_count, elapsed));
  report(2, max_triangle_vector <= 1e-9,
         fmt("triangle vs vector on the %d convex instances: max diff %.3g (tol 1e-9)",
             convex_count, max_triangle_vector));
}

void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  bool all_passed = true;
  double worst_rel = 0.0;
  long checked = 0, skipped = 0;
  int seed = 300;
  for (const int k : {4, 12, 36}) {
    for (const int m : {16, 90, 360}) {
      const CmdResult r = run_cli(fmt("gradcheck --k %d --m %d --trials 100 --seed %d", k, m,
                                      ++seed));
      if (r.exit_code != 0) {
        all_passed = false;
        continue;
      }
      const nlohmann::json j = nlohmann::json::parse(r.out);
      all_passed = all_passed && j["passed"].get<bool>();
      worst_rel = std::max(worst_rel, j["max_rel_error"].get<double>());
      checked += j["components_checked"].get<long>();
      skipped += j["components_skipped"].get<long>();
    }
  }
  const double elapsed = seconds_since(t0);
  report(3, all_passed && elapsed < 300.0,
         fmt("gradcheck k in {4,12,36} x m in {16,90,360}, 100 trials, eps 1e-5: "
             "max rel error %.3g (tol 1e-4), %ld checked / %ld skipped, %.1fs (budget 300s)",
             worst_rel, checked, skipped, elapsed));
}

void criterion_4() {
  const std::string dir = "/tmp/polarpoly_acc_demo4";
  std::filesystem::remove_all(dir);
  const CmdResult r = run_cli("demo --shape star --out-dir " + dir);
  if (r.exit_code != 0) {
    report(4, false, "demo subcommand failed");
    return;
  }
  const nlohmann::json j = nlohmann::json::parse(r.out);
  const double raster = j["raster_iou"].get<double>();

  // Trace rows: iter 1 and iter 500, columns iter,origin,iou,smooth,total.
  std::ifstream csv(dir + "/trace.csv");
  std::string line;
  std::getline(csv, line);  // header
  double first_total = -1.0, last_total = -1.0, last_iou = -1.0;
  while (std::getline(csv, line)) {
    int iter = 0;
    double o = 0, i = 0, s = 0, tot = 0;
    std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf", &iter, &o, &i, &s, &tot);
    if (iter == 1) first_total = tot;
    last_total = tot;
    last_iou = i;
  }
  const bool ok = raster > 0.9 && last_iou < 0.05 && last_total < 0.1 * first_total;
  report(4, ok,
         fmt("24-vertex star demo: raster IoU %.4f (> 0.9), polar-IoU loss %.4f at iter 500 "
             "(< 0.05), total %.4g vs %.4g at iter 1 (< 10%%)",
             raster, last_iou, last_total, first_total));
}

void criterion_5() {
  const int iters = 2000;  // long enough for the angle blocks to migrate
  const CartesianPolygon star = make_star();
  const CartesianPolygon zig = make_zigzag_band();

  const double star_c12 = fit_raster_iou(star, 12, FitAngleMode::kCumsum, iters);
  const double star_f12 = fit_raster_iou(star, 12, FitAngleMode::kFixed, iters);
  const double zig_c12 = fit_raster_iou(zig, 12, FitAngleMode::kCumsum, iters);
  const double zig_f12 = fit_raster_iou(zig, 12, FitAngleMode::kFixed, iters);

  int crossover = -1;
  for (const int k : {16, 24, 32, 48, 64, 80, 96, 128, 160}) {
    const double v = fit_raster_iou(zig, k, FitAngleMode::kFixed, iters);
    if (zig_c12 - v <= 0.02) {
      crossover = k;
      break;
    }
  }
  const bool ok = star_c12 > star_f12 && zig_c12 > zig_f12 && crossover >= 64;
  report(5, ok,
         fmt("k=12 raster IoU cumsum vs fixed: star %.4f vs %.4f, zigzag %.4f vs %.4f; "
             "fixed matches cumsum-12 within 0.02 on the zigzag first at k=%d (needs >= 64)",
             star_c12, star_f12, zig_c12, zig_f12, crossover));
}

void criterion_6() {
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<double> u(0.5, 3.0);
  VecX<double> r(16);
  for (int i = 0; i < 16; ++i) r[i] = u(rng);
  const RadialProfiled base(Vec2d::Zero(), 0.0, r);
  double max_scale_err = 0.0;
  bool exact_small = true;
  for (const double c : {1.0, 2.0, std::exp(1.0), 10.0}) {
    const RadialProfiled scaled(Vec2d::Zero(), 0.0, (c * r).eval());
    const double loss = polar_iou_loss(scaled, base);
    max_scale_err = std::max(max_scale_err, std::fabs(loss - std::log(c)));
    if (c == 1.0 && loss != 0.0) exact_small = false;
    if (c == 2.0 && loss != std::log(2.0)) exact_small = false;
  }

  double max_const_smooth = 0.0;
  for (const int m : {3, 8, 64}) {
    const RadialProfiled flat(Vec2d::Zero(), 0.2, VecX<double>::Constant(m, 1.7));
    max_const_smooth = std::max(max_const_smooth, smoothness_loss(flat));
  }

  std::uniform_real_distribution<double> uw(0.0, 2.0);
  std::uniform_real_distribution<double> ua(0.0, kTwoPi);
  double max_comp_err = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const PolarPolygond pred = random_star_polygon(rng, 6 + static_cast<int>(rng() % 10));
    const PolarPolygond target = random_star_polygon(rng, 6 + static_cast<int>(rng() % 10));
    const BoundingBox bb = bounding_box(to_cartesian(target));
    const GroundTruth gt{target.origin(), resample_triangle(target, 48, ua(rng)), bb.width(),
                         bb.height()};
    const LossWeights w{uw(rng), uw(rng), uw(rng)};
    const LossTerms<double> lt = regression_loss(pred, gt, w);
    max_comp_err = std::max(
        max_comp_err,
        std::fabs(lt.total - (w.w1 * lt.origin + w.w2 * lt.polar_iou + w.w3 * lt.smoothness)));
  }

  const bool ok = exact_small && max_scale_err <= 1e-12 && max_const_smooth == 0.0 &&
                  max_comp_err <= 1e-12;
  report(6, ok,
         fmt("scale identity max |loss - ln c| %.3g over c in {1,2,e,10} (1 and 2 bit-exact: "
             "%s); constant-profile smoothness %.3g; composition error %.3g over 1000 pairs "
             "(tol 1e-12)",
             max_scale_err, exact_small ? "yes" : "no", max_const_smooth, max_comp_err));
}

void criterion_7() {
  std::mt19937_64 rng(1007);
  double sum_centroid = 0.0, sum_bbox = 0.0, sum_vm = 0.0;
  int bbox_outside = 0;
  const int shapes = 20;
  for (int t = 0; t < shapes; ++t) {
    const CartesianPolygon target = random_lshape(rng);
    const BoundingBox bb = bounding_box(target);
    if (!point_in_polygon(bb.center(), target)) ++bbox_outside;
    const auto mode_iou = [&](OriginMode mode) {
      FitConfig cfg;
      cfg.k = 12;
      cfg.m = 180;
      cfg.max_iters = 500;
      cfg.origin_mode = mode;
      try {
        const FitResult res = fit(target, cfg);
        return polygon_iou(to_cartesian(res.polygon), target, 512);
      } catch (const std::exception&) {
        return 0.0;  // the chosen origin was unusable for this shape
      }
    };
    sum_centroid += mode_iou(OriginMode::kCentroid);
    sum_bbox += mode_iou(OriginMode::kBboxCenter);
    sum_vm += mode_iou(OriginMode::kVertexMean);
  }
  const double mc = sum_centroid / shapes, mb = sum_bbox / shapes, mv = sum_vm / shapes;
  const bool ok = mc >= mb && mc >= mv && bbox_outside >= 1;
  report(7, ok,
         fmt("20 random L-shapes, mean raster IoU by origin mode: centroid %.4f >= bbox %.4f "
             "and >= vertex-mean %.4f; bbox center outside the polygon on %d fixtures (>= 1)",
             mc, mb, mv, bbox_outside));
}

void criterion_8() {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int exact = 0;
  const int total = 500;
  for (int t = 0; t < total; ++t) {
    const int n = 1 + static_cast<int>(rng() % 7);
    const int m = 1 + static_cast<int>(rng() % 7);
    Eigen::MatrixXd iou(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) iou(i, j) = u(rng);
    const auto pairs = hungarian_assign((1.0 - iou.array()).matrix());
    if (pair_total(iou, pairs) == pair_total(iou, best_assignment(iou))) ++exact;
  }
  report(8, exact == total,
         fmt("assignment total equals exhaustive optimum on %d/%d random matrices up to 7x7, "
             "compared exactly",
             exact, total));
}

void criterion_9() {
  const std::string dir = "/tmp/polarpoly_acc_det";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_polygons(dir + "/star.json",
                 {{"star", make_star(5, 1.0, 0.5, Vec2d(1.5, 1.5), kPi / 2.0), std::nullopt}});
  write_polygons(dir + "/pair.json",
                 {{"a", make_regular_polygon(6, 1.0, Vec2d(0.0, 0.0)), std::nullopt},
                  {"b", make_regular_polygon(5, 0.8, Vec2d(4.0, 0.0)), std::nullopt}});

  // Each invocation is repeated with byte-identical argv; artifacts from the
  // first round are snapshotted before the rerun overwrites them.
  const std::string work = dir + "/work";
  const std::vector<std::string> artifacts = {
      "fit.json",       "fit.svg",          "fit.csv",          "grad.json",
      "res.json",       "res.csv",          "eval.json",        "demo.json",
      "demo/trace.csv", "demo/snapshot_001.svg", "demo/snapshot_200.svg",
      "demo/snapshot_500.svg"};
  for (int round = 0; round < 2; ++round) {
    std::filesystem::remove_all(work);
    std::filesystem::create_directories(work + "/demo");
    const CmdResult f = run_cli(fmt("fit --target %s/star.json --k 12 --m 90 --iters 120 "
                                    "--seed 7 --snapshot-iters 1,60,120 --out-svg %s/fit.svg "
                                    "--out-trace %s/fit.csv",
                                    dir.c_str(), work.c_str(), work.c_str()));
    std::ofstream(work + "/fit.json", std::ios::binary) << f.out;
    const CmdResult g = run_cli("gradcheck --k 6 --m 24 --trials 10 --seed 4");
    std::ofstream(work + "/grad.json", std::ios::binary) << g.out;
    const CmdResult rs = run_cli(
        fmt("resample --input %s/pair.json --m 64 --out %s/res.csv", dir.c_str(), work.c_str()));
    std::ofstream(work + "/res.json", std::ios::binary) << rs.out;
    const CmdResult ev = run_cli(
        fmt("eval --pred %s/pair.json --gt %s/pair.json --grid 256", dir.c_str(), dir.c_str()));
    std::ofstream(work + "/eval.json", std::ios::binary) << ev.out;
    const CmdResult dm = run_cli(fmt("demo --shape star --out-dir %s/demo", work.c_str()));
    std::ofstream(work + "/demo.json", std::ios::binary) << dm.out;

    const std::string snap = dir + "/r" + std::to_string(round);
    std::filesystem::create_directories(snap + "/demo");
    for (const std::string& a : artifacts)
      std::filesystem::copy_file(work + "/" + a, snap + "/" + a);
  }

  int mismatches = 0;
  for (const std::string& a : artifacts) {
    const std::string first = slurp(dir + "/r0/" + a);
    if (first != slurp(dir + "/r1/" + a) || first.empty()) {
      ++mismatches;
      std::fprintf(stderr, "criterion 9: %s differs between reruns\n", a.c_str());
    }
  }

  report(9, mismatches == 0,
         fmt("fit, gradcheck, resample, eval and demo repeated with identical argv: %d of %d "
             "compared artifacts differ (SVG, CSV, JSON byte comparison)",
             mismatches, static_cast<int>(artifacts.size())));
}

}  // namespace

int main() {
  criteria_1_and_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (g_failures > 0) {
    std::printf("%d criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all 9 criteria passed\n");
  return 0;
}
