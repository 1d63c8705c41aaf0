#include "CLI11.hpp"
#include "json.hpp"

#include "polarpoly/eval.hpp"
#include "polarpoly/fit.hpp"
#include "polarpoly/io.hpp"
#include "polarpoly/shapes.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace polarpoly;

namespace {

constexpr const char* kTargetColor = "#1f77b4";  // blue
constexpr const char* kFitColor = "#d62728";     // red

double stroke_width_for(const CartesianPolygon& poly) {
  const BoundingBox bb = bounding_box(poly);
  return 0.008 * std::max(bb.width(), bb.height());
}

void print_json(const nlohmann::ordered_json& j) { std::cout << j.dump() << "\n"; }

void emit_fit_outputs(const CartesianPolygon& target, const FitResult& res,
                      const std::string& out_svg, const std::string& out_trace) {
  if (!out_trace.empty()) write_trace_csv(res.trace, out_trace);
  if (!out_svg.empty()) {
    const double sw = stroke_width_for(target);
    std::vector<std::pair<CartesianPolygon, SvgStyle>> layers;
    layers.push_back({target, {kTargetColor, sw, "none", 1.0}});
    for (const FitSnapshot& snap : res.trace.snapshots)
      layers.push_back({to_cartesian(snap.polygon), {kFitColor, sw, "none", 0.55}});
    layers.push_back({to_cartesian(res.polygon), {kFitColor, sw, "none", 1.0}});
    render_svg(layers, out_svg);
  }
}

nlohmann::ordered_json fit_json(const FitResult& res, double raster_iou) {
  nlohmann::ordered_json j;
  j["origin_loss"] = res.final_losses.origin;
  j["iou_loss"] = res.final_losses.polar_iou;
  j["smooth_loss"] = res.final_losses.smoothness;
  j["total"] = res.final_losses.total;
  j["raster_iou"] = raster_iou;
  j["iterations"] = static_cast<int>(res.trace.records.size());
  return j;
}

struct FitOpts {
  std::string target;
  FitConfig cfg;
  std::string out_svg;
  std::string out_trace;
};

int run_fit(const FitOpts& o) {
  const std::vector<PolygonRecord> records = read_polygons(o.target);
  if (records.size() != 1)
    throw std::invalid_argument("fit: target file must contain exactly one polygon");
  const CartesianPolygon& target = records.front().polygon;

  const FitResult res = fit(target, o.cfg);
  const double raster = polygon_iou(to_cartesian(res.polygon), target, 512);
  emit_fit_outputs(target, res, o.out_svg, o.out_trace);
  std::fprintf(stderr, "fit: %d iterations, total %.6g, raster IoU %.4f\n",
               static_cast<int>(res.trace.records.size()), res.final_losses.total, raster);
  print_json(fit_json(res, raster));
  return 0;
}

struct ResampleOpts {
  std::string input;
  int m = 360;
  double phase = 0.0;
  std::string method = "triangle";
  std::string out;
};

int run_resample(const ResampleOpts& o) {
  const std::vector<PolygonRecord> records = read_polygons(o.input);
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw std::invalid_argument("resample: cannot open " + o.out);
  out << "id,angle,radius\n";
  char buf[160];
  for (const PolygonRecord& rec : records) {
    const Vec2d origin = rec.origin ? *rec.origin : geometric_centroid(rec.polygon);
    const RadialProfiled prof = [&]() -> RadialProfiled {
      try {
        if (o.method == "triangle")
          return resample_triangle(to_polar(rec.polygon, origin), o.m, o.phase);
        if (o.method == "vector") return resample_vector(rec.polygon, origin, o.m, o.phase);
        return resample_oracle(rec.polygon, origin, o.m, o.phase);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("resample: polygon '" + rec.id + "': " + e.what());
      }
    }();
    for (Eigen::Index j = 0; j < prof.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%s,%.12g,%.12g\n", rec.id.c_str(), prof.ray_angle(j),
                    prof.radii()[j]);
      out << buf;
    }
  }
  if (!out) throw std::invalid_argument("resample: write failure on " + o.out);
  std::fprintf(stderr, "resample: %d polygons, %d rays each\n", static_cast<int>(records.size()),
               o.m);
  nlohmann::ordered_json j;
  j["polygons"] = static_cast<int>(records.size());
  j["m"] = o.m;
  print_json(j);
  return 0;
}

struct EvalOpts {
  std::string pred;
  std::string gt;
  double iou_threshold = 0.5;
  int grid = 512;
};

int run_eval(const EvalOpts& o) {
  std::vector<CartesianPolygon> preds;
  for (const PolygonRecord& rec : read_polygons(o.pred)) preds.push_back(rec.polygon);
  std::vector<CartesianPolygon> gts;
  for (const PolygonRecord& rec : read_polygons(o.gt)) gts.push_back(rec.polygon);
  const MatchReport rep = evaluate(preds, gts, o.iou_threshold, o.grid);
  std::fprintf(stderr, "eval: %zu preds, %zu gts, %zu matches\n", preds.size(), gts.size(),
               rep.assignments.size());
  nlohmann::ordered_json j;
  j["precision"] = rep.precision;
  j["recall"] = rep.recall;
  j["f1"] = rep.f1;
  nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
  for (const MatchedPair& p : rep.assignments)
    pairs.push_back({{"pred", p.pred}, {"gt", p.gt}, {"iou", p.iou}});
  j["assignments"] = std::move(pairs);
  print_json(j);
  return 0;
}

int run_gradcheck_cmd(const GradCheckConfig& cfg) {
  const GradCheckReport rep = run_gradcheck(cfg);
  std::fprintf(stderr, "gradcheck: %d trials, %ld checked, %ld skipped, max rel %.3g\n",
               rep.trials, static_cast<long>(rep.components_checked),
               static_cast<long>(rep.components_skipped), rep.max_rel_error);
  nlohmann::ordered_json j;
  j["trials"] = rep.trials;
  j["components_checked"] = rep.components_checked;
  j["components_skipped"] = rep.components_skipped;
  j["max_rel_error"] = rep.max_rel_error;
  j["max_abs_error"] = rep.max_abs_error;
  j["passed"] = rep.passed;
  print_json(j);
  return rep.passed ? 0 : 2;
}

struct DemoOpts {
  std::string shape = "star";
  std::string out_dir;
};

int run_demo(const DemoOpts& o) {
  CartesianPolygon target = o.shape == "star"      ? make_star()
                            : o.shape == "crosswalk" ? make_zigzag_band()
                                                     : make_lshape();
  std::filesystem::create_directories(o.out_dir);

  FitConfig cfg;
  cfg.k = 24;
  cfg.m = 360;
  cfg.max_iters = 500;
  cfg.snapshot_iters = {1, 200, 500};
  const FitResult res = fit(target, cfg);
  const double raster = polygon_iou(to_cartesian(res.polygon), target, 512);

  write_trace_csv(res.trace, o.out_dir + "/trace.csv");
  const double sw = stroke_width_for(target);
  char name[64];
  for (const FitSnapshot& snap : res.trace.snapshots) {
    std::snprintf(name, sizeof name, "/snapshot_%03d.svg", snap.iter);
    render_svg({{target, {kTargetColor, sw, "none", 1.0}},
                {to_cartesian(snap.polygon), {kFitColor, sw, "none", 1.0}}},
               o.out_dir + name);
  }
  std::fprintf(stderr, "demo: %s target, raster IoU %.4f\n", o.shape.c_str(), raster);
  print_json(fit_json(res, raster));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentiable polar polygon fitting toolkit"};
  app.require_subcommand(1);

  const std::map<std::string, FitAngleMode> angle_modes{{"cumsum", FitAngleMode::kCumsum},
                                                        {"bin-offset", FitAngleMode::kBinOffset},
                                                        {"fixed", FitAngleMode::kFixed}};
  const std::map<std::string, OriginMode> origin_modes{{"centroid", OriginMode::kCentroid},
                                                       {"bbox", OriginMode::kBboxCenter},
                                                       {"vertex-mean", OriginMode::kVertexMean}};

  FitOpts fo;
  CLI::App* fit_cmd = app.add_subcommand("fit", "Fit a polar polygon to a target polygon");
  fit_cmd->add_option("--target", fo.target, "Polygon document with exactly one target")
      ->required()
      ->check(CLI::ExistingFile);
  fit_cmd->add_option("--k", fo.cfg.k, "Number of polygon vertices");
  fit_cmd->add_option("--m", fo.cfg.m, "Number of sampling rays");
  fit_cmd->add_option("--iters", fo.cfg.max_iters, "Iteration budget");
  fit_cmd->add_option("--angle-mode", fo.cfg.angle_mode, "Angle parameterization")
      ->transform(CLI::CheckedTransformer(angle_modes));
  fit_cmd->add_option("--origin-mode", fo.cfg.origin_mode, "Ground-truth origin choice")
      ->transform(CLI::CheckedTransformer(origin_modes));
  fit_cmd->add_option("--w1", fo.cfg.weights.w1, "Origin loss weight");
  fit_cmd->add_option("--w2", fo.cfg.weights.w2, "Polar IoU loss weight");
  fit_cmd->add_option("--w3", fo.cfg.weights.w3, "Smoothness loss weight");
  fit_cmd->add_option("--lr", fo.cfg.learning_rate, "Learning rate");
  fit_cmd->add_option("--seed", fo.cfg.seed, "Run label, fitting itself is deterministic");
  fit_cmd->add_option("--out-svg", fo.out_svg, "Overlay SVG of target, snapshots and result");
  fit_cmd->add_option("--out-trace", fo.out_trace, "Per-iteration loss CSV");
  fit_cmd->add_option("--snapshot-iters", fo.cfg.snapshot_iters, "Iterations to snapshot")
      ->delimiter(',');

  ResampleOpts ro;
  CLI::App* resample_cmd = app.add_subcommand("resample", "Dense radial profiles of polygons");
  resample_cmd->add_option("--input", ro.input, "Polygon document")
      ->required()
      ->check(CLI::ExistingFile);
  resample_cmd->add_option("--m", ro.m, "Number of sampling rays");
  resample_cmd->add_option("--phase", ro.phase, "Angle of ray 0");
  resample_cmd->add_option("--method", ro.method, "Resampling route")
      ->check(CLI::IsMember({"triangle", "vector", "oracle"}));
  resample_cmd->add_option("--out", ro.out, "Output CSV path")->required();

  EvalOpts eo;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Match predictions to ground truths");
  eval_cmd->add_option("--pred", eo.pred, "Predicted polygons")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--gt", eo.gt, "Ground-truth polygons")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--iou-threshold", eo.iou_threshold, "Match threshold in (0,1)");
  eval_cmd->add_option("--grid", eo.grid, "Raster grid resolution");

  GradCheckConfig go;
  CLI::App* grad_cmd = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradients");
  grad_cmd->add_option("--k", go.k, "Number of polygon vertices");
  grad_cmd->add_option("--m", go.m, "Number of sampling rays");
  grad_cmd->add_option("--trials", go.trials, "Random configurations to test");
  grad_cmd->add_option("--eps", go.eps, "Central difference step");
  grad_cmd->add_option("--tolerance", go.rel_tol, "Relative error tolerance");
  grad_cmd->add_option("--seed", go.seed, "Random seed");

  DemoOpts dopts;
  CLI::App* demo_cmd = app.add_subcommand("demo", "Fit a built-in shape and write snapshots");
  demo_cmd->add_option("--shape", dopts.shape, "Built-in target")
      ->check(CLI::IsMember({"star", "crosswalk", "lshape"}));
  demo_cmd->add_option("--out-dir", dopts.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(fit_cmd)) return run_fit(fo);
    if (app.got_subcommand(resample_cmd)) return run_resample(ro);
    if (app.got_subcommand(eval_cmd)) return run_eval(eo);
    if (app.got_subcommand(grad_cmd)) return run_gradcheck_cmd(go);
    return run_demo(dopts);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
