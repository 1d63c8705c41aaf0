// The three-term shape regression loss: normalized smooth-L1 on the origin,
// log-ratio polar IoU on matched radial profiles, and first+second difference
// smoothness on the predicted profile.
#pragma once

#include "polarpoly/common.hpp"
#include "polarpoly/polygon.hpp"
#include "polarpoly/resample.hpp"

#include <cmath>

namespace polarpoly {

struct LossWeights {
  double w1 = 1.0;  // origin term
  double w2 = 1.0;  // polar IoU term
  double w3 = 0.1;  // smoothness term
};

template <typename S>
struct LossTerms {
  S origin;
  S polar_iou;
  S smoothness;
  S total;
};

using LossBreakdown = LossTerms<double>;

// Everything a fit needs to know about the target, produced together by the
// encode step: origin, dense profile, and the bbox extents that normalize the
// origin loss.
struct GroundTruth {
  Vec2d origin;
  RadialProfiled profile;
  double width;
  double height;
};

namespace detail {
inline void check_weights(const LossWeights& w) {
  if (!(w.w1 >= 0.0) || !(w.w2 >= 0.0) || !(w.w3 >= 0.0) || !std::isfinite(w.w1) ||
      !std::isfinite(w.w2) || !std::isfinite(w.w3))
    throw std::invalid_argument("loss weights: nonnegative finite values required");
}
}  // namespace detail

// Huber-style smooth L1 with beta = 1.
template <typename S>
S smooth_l1(const S& x, const S& y) {
  using std::abs;
  const S d = x - y;
  const S ad = abs(d);
  if (value_of(ad) < 1.0) return S(0.5) * (d * d);
  return ad - S(0.5);
}

// Per-axis smooth L1 normalized by the ground-truth bbox extents.
template <typename S>
S origin_loss(const Vec2<S>& pred, const Vec2d& gt, double gt_w, double gt_h) {
  if (!(gt_w > 0.0) || !(gt_h > 0.0))
    throw std::invalid_argument("origin_loss: bbox extents must be positive");
  return smooth_l1(pred.x(), S(gt.x())) / S(gt_w) + smooth_l1(pred.y(), S(gt.y())) / S(gt_h);
}

// log(sum max(r, r') / sum min(r, r')). Ties route through the first
// (predicted) argument. Profiles must share m and ray phase; origins are
// deliberately not compared, the loss measures shape alone.
template <typename S>
S polar_iou_loss(const RadialProfile<S>& pred, const RadialProfile<S>& gt) {
  if (pred.size() != gt.size() || pred.phase() != gt.phase())
    throw std::invalid_argument("polar_iou_loss: mismatched m or ray phase");
  using std::log;
  using std::max;
  using std::min;
  S sum_max = max(pred.radii()[0], gt.radii()[0]);
  S sum_min = min(pred.radii()[0], gt.radii()[0]);
  for (Eigen::Index i = 1; i < pred.size(); ++i) {
    sum_max = sum_max + max(pred.radii()[i], gt.radii()[i]);
    sum_min = sum_min + min(pred.radii()[i], gt.radii()[i]);
  }
  return log(sum_max / sum_min);
}

// Mean |first difference| over i in [1, m-1] plus mean |second difference|
// over i in [1, m-2]. With `circular`, both differences wrap and average
// over all m rays.
template <typename S>
S smoothness_loss(const RadialProfile<S>& prof, bool circular = false) {
  using std::abs;
  const VecX<S>& r = prof.radii();
  const Eigen::Index m = r.size();
  if (circular) {
    S s1 = S(0.0), s2 = S(0.0);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index prev = (i + m - 1) % m;
      const Eigen::Index next = (i + 1) % m;
      s1 = s1 + abs(r[i] - r[prev]);
      s2 = s2 + abs(r[next] - S(2.0) * r[i] + r[prev]);
    }
    const double dm = static_cast<double>(m);
    return s1 / S(dm) + s2 / S(dm);
  }
  S s1 = abs(r[1] - r[0]);
  for (Eigen::Index i = 2; i < m; ++i) s1 = s1 + abs(r[i] - r[i - 1]);
  S s2 = abs(r[2] - S(2.0) * r[1] + r[0]);
  for (Eigen::Index i = 2; i < m - 1; ++i) s2 = s2 + abs(r[i + 1] - S(2.0) * r[i] + r[i - 1]);
  return s1 / S(static_cast<double>(m - 1)) + s2 / S(static_cast<double>(m - 2));
}

// Ground-truth values lifted into the pipeline's scalar as constants.
template <typename S>
RadialProfile<S> lift_profile(const RadialProfiled& p) {
  VecX<S> r(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) r[i] = S(p.radii()[i]);
  Vec2<S> o;
  o.x() = S(p.origin().x());
  o.y() = S(p.origin().y());
  return RadialProfile<S>(o, p.phase(), std::move(r));
}

// Combined loss. The prediction is resampled about its own origin with the
// ground truth's ray count and phase, so the IoU term compares matched rays.
template <typename S>
LossTerms<S> regression_loss(const PolarPolygon<S>& pred, const GroundTruth& gt,
                             const LossWeights& w) {
  detail::check_weights(w);
  const RadialProfile<S> pred_prof =
      resample_triangle(pred, static_cast<int>(gt.profile.size()), gt.profile.phase());
  const RadialProfile<S> gt_prof = lift_profile<S>(gt.profile);
  LossTerms<S> out{origin_loss(pred.origin(), gt.origin, gt.width, gt.height),
                   polar_iou_loss(pred_prof, gt_prof),
                   smoothness_loss(pred_prof),
                   S(0.0)};
  out.total = S(w.w1) * out.origin + S(w.w2) * out.polar_iou + S(w.w3) * out.smoothness;
  return out;
}

}  // namespace polarpoly
