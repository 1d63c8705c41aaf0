#include "polarpoly/fit.hpp"

#include <algorithm>
#include <cmath>

namespace polarpoly {

namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

const char* origin_mode_name(OriginMode mode) {
  switch (mode) {
    case OriginMode::kCentroid: return "centroid";
    case OriginMode::kBboxCenter: return "bbox center";
    default: return "vertex mean";
  }
}

}  // namespace

void adam_step(VectorXd& params, const VectorXd& grad, AdamState& state, double learning_rate) {
  if (grad.size() != params.size())
    throw std::invalid_argument("adam_step: gradient size mismatch");
  if (state.step == 0) {
    state.m = VectorXd::Zero(params.size());
    state.v = VectorXd::Zero(params.size());
  }
  if (state.m.size() != params.size())
    throw std::invalid_argument("adam_step: state size mismatch");
  ++state.step;
  const double c1 = 1.0 - std::pow(kAdamBeta1, state.step);
  const double c2 = 1.0 - std::pow(kAdamBeta2, state.step);
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    state.m[i] = kAdamBeta1 * state.m[i] + (1.0 - kAdamBeta1) * g;
    state.v[i] = kAdamBeta2 * state.v[i] + (1.0 - kAdamBeta2) * g * g;
    const double mhat = state.m[i] / c1;
    const double vhat = state.v[i] / c2;
    params[i] -= learning_rate * mhat / (std::sqrt(vhat) + kAdamEps);
  }
}

GroundTruth make_ground_truth(const CartesianPolygon& target, int m, OriginMode mode) {
  Vec2d origin;
  switch (mode) {
    case OriginMode::kCentroid: origin = geometric_centroid(target); break;
    case OriginMode::kBboxCenter: origin = bounding_box(target).center(); break;
    default: origin = vertex_mean(target); break;
  }
  if (!point_in_polygon(origin, target))
    throw std::invalid_argument(std::string("make_ground_truth: ") + origin_mode_name(mode) +
                                " origin lies outside the polygon (origin must be interior)");
  const BoundingBox bb = bounding_box(target);
  return GroundTruth{origin, resample_vector(target, origin, m, kPi / static_cast<double>(m)),
                     bb.width(), bb.height()};
}

FitResult fit(const CartesianPolygon& target, const FitConfig& cfg) {
  if (cfg.k < 3) throw std::invalid_argument("fit: k >= 3 required");
  if (cfg.m < cfg.k) throw std::invalid_argument("fit: m >= k required");
  if (cfg.max_iters < 1) throw std::invalid_argument("fit: max_iters >= 1 required");
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
    throw std::invalid_argument("fit: learning rate must be positive and finite");
  if (cfg.convergence_tol < 0.0)
    throw std::invalid_argument("fit: convergence_tol must be nonnegative");
  for (int it : cfg.snapshot_iters)
    if (it < 1 || it > cfg.max_iters)
      throw std::invalid_argument("fit: snapshot iteration out of range");

  const GroundTruth gt = make_ground_truth(target, cfg.m, cfg.origin_mode);
  const BoundingBox bb = bounding_box(target);
  const GridCell cell{bb.min, Vec2d(bb.width(), bb.height())};
  DecoderConfig dec;
  dec.k = cfg.k;
  dec.mu = 0.25 * (bb.width() + bb.height());
  dec.angle_mode =
      cfg.angle_mode == FitAngleMode::kBinOffset ? AngleMode::kBinOffset : AngleMode::kCumsum;

  const int n = regression_size(cfg.k);
  const bool fixed = cfg.angle_mode == FitAngleMode::kFixed;
  const int param_count = fixed ? 2 + cfg.k : n;

  // In fixed mode only the leading origin and radius block is optimized; the
  // angle logits stay zero, which the cumsum decoder maps to uniform rays.
  VectorXd theta = VectorXd::Zero(param_count);
  auto expand = [&](const VectorXd& t) {
    VectorXd f = VectorXd::Zero(n);
    f.head(t.size()) = t;
    return f;
  };

  FitTrace trace;
  trace.k = cfg.k;
  trace.m = cfg.m;
  trace.param_count = param_count;
  trace.angle_mode = cfg.angle_mode;
  trace.origin_mode = cfg.origin_mode;
  trace.records.reserve(static_cast<std::size_t>(cfg.max_iters));

  AdamState adam;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    const VectorXd f = expand(theta);
    const LossGradient lg = grad_regression_loss(f, cell, dec, gt, cfg.weights);
    trace.records.push_back({iter, lg.breakdown});
    if (std::find(cfg.snapshot_iters.begin(), cfg.snapshot_iters.end(), iter) !=
        cfg.snapshot_iters.end())
      trace.snapshots.push_back({iter, decode(VecX<double>(f), cell, dec)});

    if (cfg.convergence_tol > 0.0 && trace.records.size() > 20) {
      const double before = trace.records[trace.records.size() - 21].losses.total;
      if (before - lg.breakdown.total < cfg.convergence_tol) break;
    }

    VectorXd g = lg.gradient.head(param_count);
    if (cfg.optimizer == Optimizer::kAdam) {
      adam_step(theta, g, adam, cfg.learning_rate);
    } else {
      theta -= cfg.learning_rate * g;
    }
    if (!theta.allFinite()) throw NumericalError("fit: parameters diverged");
  }

  const VectorXd f = expand(theta);
  FitResult result{decode(VecX<double>(f), cell, dec), std::move(trace), {}};
  result.final_losses = regression_loss(result.polygon, gt, cfg.weights);
  return result;
}

}  // namespace polarpoly
