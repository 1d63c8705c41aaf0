#include "polarpoly/gradient.hpp"

#include "polarpoly/shapes.hpp"

#include <cmath>
#include <optional>
#include <random>

namespace polarpoly {

namespace {

// Smallest angular distance from any decoded vertex to the uniform ray grid.
double min_ray_vertex_gap(const VecX<double>& vertex_angles, int m, double phase) {
  const double bin = kTwoPi / static_cast<double>(m);
  double best = bin;
  for (Eigen::Index i = 0; i < vertex_angles.size(); ++i) {
    const double rel = std::fmod(normalize_angle(vertex_angles[i] - phase), bin);
    best = std::min(best, std::min(rel, bin - rel));
  }
  return best;
}

}  // namespace

LossGradient grad_regression_loss(const VectorXd& f, const GridCell& cell,
                                  const DecoderConfig& cfg, const GroundTruth& gt,
                                  const LossWeights& w) {
  ad::Tape tape;
  const std::vector<ad::Var> in = tape.inputs(f);
  const int n = static_cast<int>(f.size());
  VecX<ad::Var> fv(n);
  for (int i = 0; i < n; ++i) fv[i] = in[static_cast<std::size_t>(i)];

  const PolarPolygon<ad::Var> pred = decode(fv, cell, cfg);
  const LossTerms<ad::Var> lt = regression_loss(pred, gt, w);
  if (!std::isfinite(lt.total.value()))
    throw NumericalError("grad_regression_loss: non-finite loss value");
  VectorXd g = tape.gradient(lt.total, n);
  if (!g.allFinite()) throw NumericalError("grad_regression_loss: non-finite gradient");

  VecX<double> va(pred.size());
  for (Eigen::Index i = 0; i < pred.size(); ++i) va[i] = pred.angles()[i].value();
  const bool flagged =
      min_ray_vertex_gap(va, static_cast<int>(gt.profile.size()), gt.profile.phase()) <
      kBranchGuardTol;

  return LossGradient{{lt.origin.value(), lt.polar_iou.value(), lt.smoothness.value(),
                       lt.total.value()},
                      std::move(g),
                      flagged};
}

VectorXd finite_difference(const std::function<double(const VectorXd&)>& fn, const VectorXd& x,
                           double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite_difference: eps must be positive");
  VectorXd g(x.size());
  VectorXd p = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    p[i] = xi + eps;
    const double hi = fn(p);
    p[i] = xi - eps;
    const double lo = fn(p);
    p[i] = xi;
    g[i] = (hi - lo) / (2.0 * eps);
  }
  return g;
}

BranchSignature branch_signature(const VectorXd& f, const GridCell& cell,
                                 const DecoderConfig& cfg, const GroundTruth& gt) {
  const PolarPolygond pred = decode(VecX<double>(f), cell, cfg);
  const int m = static_cast<int>(gt.profile.size());
  const double phase = gt.profile.phase();
  const RadialProfiled prof = resample_triangle(pred, m, phase);

  BranchSignature sig;
  std::vector<double> va(static_cast<std::size_t>(pred.size()));
  for (Eigen::Index i = 0; i < pred.size(); ++i) va[static_cast<std::size_t>(i)] = pred.angles()[i];
  const std::vector<RayBracket> br = compute_ray_brackets(va, m, phase);
  sig.bracket.reserve(static_cast<std::size_t>(m));
  for (const RayBracket& b : br)
    sig.bracket.push_back(b.exact >= 0 ? -(b.exact + 1) : b.prev * 4 + (b.prev_wrap + 1));

  sig.iou_pick.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j)
    sig.iou_pick.push_back(prof.radii()[j] >= gt.profile.radii()[j] ? 1 : 0);

  const Vec2d o = pred.origin();
  sig.l1_branch = static_cast<std::uint8_t>((std::fabs(o.x() - gt.origin.x()) < 1.0 ? 1 : 0) |
                                            (std::fabs(o.y() - gt.origin.y()) < 1.0 ? 2 : 0));

  auto sign_of = [](double x) -> std::int8_t { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
  sig.diff_sign.reserve(static_cast<std::size_t>(2 * m));
  for (int i = 1; i < m; ++i) sig.diff_sign.push_back(sign_of(prof.radii()[i] - prof.radii()[i - 1]));
  for (int i = 1; i < m - 1; ++i)
    sig.diff_sign.push_back(
        sign_of(prof.radii()[i + 1] - 2.0 * prof.radii()[i] + prof.radii()[i - 1]));

  // Clamp states: origin logits against the sigmoid clamp, radius logits
  // against the exp clamp, angle logits against their decoder's bound.
  auto state = [](double x, double bound) -> std::int8_t {
    return x > bound ? 1 : (x < -bound ? -1 : 0);
  };
  sig.clamp_state.reserve(static_cast<std::size_t>(f.size()));
  sig.clamp_state.push_back(state(f[0], kSigmoidLogitClamp));
  sig.clamp_state.push_back(state(f[1], kSigmoidLogitClamp));
  for (int i = 0; i < cfg.k; ++i) sig.clamp_state.push_back(state(f[2 + i], kExpLogitClamp));
  if (cfg.angle_mode == AngleMode::kCumsum) {
    double shift = f[2 + cfg.k];
    for (int i = 1; i < cfg.k; ++i) shift = std::max(shift, f[2 + cfg.k + i]);
    for (int i = 0; i < cfg.k; ++i)
      sig.clamp_state.push_back(state(f[2 + cfg.k + i] - shift, kExpLogitClamp));
  } else {
    for (int i = 0; i < cfg.k; ++i)
      sig.clamp_state.push_back(state(f[2 + cfg.k + i], kSigmoidLogitClamp));
  }
  return sig;
}

GradCheckReport run_gradcheck(const GradCheckConfig& cfg) {
  if (cfg.k < 3 || cfg.m < 3 || cfg.trials < 1)
    throw std::invalid_argument("gradcheck: k >= 3, m >= 3, trials >= 1 required");
  if (!(cfg.eps > 0.0) || !(cfg.rel_tol > 0.0))
    throw std::invalid_argument("gradcheck: eps and tolerance must be positive");

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> target_k(5, 24);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::normal_distribution<double> n05(0.0, 0.5);

  // Gradient magnitudes below this use the absolute tolerance instead of the
  // relative one.
  constexpr double kSmallMagnitude = 1e-6;

  GradCheckReport report;
  const int n = regression_size(cfg.k);
  const LossWeights weights;
  int attempts = 0;
  const int max_attempts = cfg.trials * 50;

  while (report.trials < cfg.trials && attempts < max_attempts) {
    ++attempts;
    const PolarPolygond target = random_star_polygon(rng, target_k(rng), true);
    const CartesianPolygon cart = to_cartesian(target);
    const BoundingBox bb = bounding_box(cart);
    const GroundTruth gt{target.origin(),
                         resample_vector(cart, target.origin(), cfg.m,
                                         kPi / static_cast<double>(cfg.m)),
                         bb.width(), bb.height()};
    const GridCell cell{bb.min, Vec2d(bb.width(), bb.height())};
    DecoderConfig dec;
    dec.k = cfg.k;
    dec.mu = 0.25 * (bb.width() + bb.height());
    dec.angle_mode = report.trials % 2 == 0 ? AngleMode::kCumsum : AngleMode::kBinOffset;

    VectorXd f(n);
    f[0] = n01(rng);
    f[1] = n01(rng);
    for (int i = 0; i < cfg.k; ++i) f[2 + i] = n05(rng);
    for (int i = 0; i < cfg.k; ++i) f[2 + cfg.k + i] = n05(rng);

    // Random logits can decode to a polygon with an angular gap >= pi, which
    // is outside the resampler's star-shaped domain; redraw those too.
    std::optional<LossGradient> maybe_lg;
    try {
      maybe_lg = grad_regression_loss(f, cell, dec, gt, weights);
    } catch (const std::invalid_argument&) {
      continue;
    }
    const LossGradient& lg = *maybe_lg;
    if (lg.near_branch_boundary) continue;  // redraw: input sits on a bracket boundary

    const auto fn = [&](const VectorXd& x) {
      return regression_loss(decode(VecX<double>(x), cell, dec), gt, weights).total;
    };
    const auto try_signature = [&](const VectorXd& x) -> std::optional<BranchSignature> {
      try {
        return branch_signature(x, cell, dec, gt);
      } catch (const std::invalid_argument&) {
        return std::nullopt;
      }
    };
    const BranchSignature sig0 = branch_signature(f, cell, dec, gt);

    VectorXd p = f;
    for (int i = 0; i < n; ++i) {
      const double xi = f[i];
      p[i] = xi + cfg.eps;
      const std::optional<BranchSignature> sig_hi = try_signature(p);
      bool ok = sig_hi.has_value() && *sig_hi == sig0;
      const double hi = ok ? fn(p) : 0.0;
      p[i] = xi - cfg.eps;
      double lo = 0.0;
      if (ok) {
        const std::optional<BranchSignature> sig_lo = try_signature(p);
        ok = sig_lo.has_value() && *sig_lo == sig0;
        if (ok) lo = fn(p);
      }
      p[i] = xi;
      if (!ok) {
        ++report.components_skipped;  // FD straddles a branch boundary here
        continue;
      }
      const double fd = (hi - lo) / (2.0 * cfg.eps);
      const double a = lg.gradient[i];
      const double abs_err = std::fabs(a - fd);
      const double mag = std::max(std::fabs(a), std::fabs(fd));
      ++report.components_checked;
      if (mag < kSmallMagnitude) {
        report.max_abs_error = std::max(report.max_abs_error, abs_err);
        if (abs_err > cfg.abs_tol) report.passed = false;
      } else {
        const double rel = abs_err / mag;
        report.max_rel_error = std::max(report.max_rel_error, rel);
        if (rel > cfg.rel_tol) report.passed = false;
      }
    }
    ++report.trials;
  }
  if (report.trials < cfg.trials)
    throw NumericalError("gradcheck: could not draw enough off-boundary trials");
  return report;
}

}  // namespace polarpoly
