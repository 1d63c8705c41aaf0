// Regression-vector codec: maps a flat (2 + 2k)-vector of network-style
// logits to a PolarPolygon and encodes a ground-truth polygon into the
// matching training target. Layout of f: [origin x, origin y | k radius
// logits | k angle logits].
#pragma once

#include "polarpoly/common.hpp"
#include "polarpoly/polygon.hpp"
#include "polarpoly/resample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace polarpoly {

// Anchor cell of the coarse grid the origin is regressed against.
struct GridCell {
  Vec2d corner = Vec2d::Zero();  // lower-left corner (gx, gy)
  Vec2d size = Vec2d::Ones();    // extents (sx, sy), both > 0
};

enum class AngleMode { kCumsum, kBinOffset };

struct DecoderConfig {
  int k = 12;          // vertex count, >= 3
  double mu = 1.0;     // radius prior (scale of exp-decoded radii), > 0
  AngleMode angle_mode = AngleMode::kCumsum;
};

inline int regression_size(int k) { return 2 + 2 * k; }

// Saturation guards. Sigmoid-decoded logits clamp at 30: past that the
// sigmoid rounds to exactly 1.0 in double precision and "strictly inside"
// guarantees die. Exp-decoded logits clamp at 50 per the overflow guard.
inline constexpr double kSigmoidLogitClamp = 30.0;
inline constexpr double kExpLogitClamp = 50.0;

// Uniform floor mixed into the angle softmax so cumulative angles stay
// strictly increasing for any finite logits (without it, spreads past ~36
// make adjacent cumulative sums collide in double precision).
inline constexpr double kAngleWeightFloor = 1e-12;

namespace detail {

template <typename S>
S clamp_logit(const S& x, double bound) {
  if (value_of(x) > bound) return S(bound);
  if (value_of(x) < -bound) return S(-bound);
  return x;
}

template <typename S>
S logistic(const S& x) {
  using std::exp;
  if (value_of(x) >= 0.0) return S(1.0) / (S(1.0) + exp(-x));
  const S e = exp(x);
  return e / (S(1.0) + e);
}

inline void check_cell(const GridCell& cell) {
  if (!(cell.size.x() > 0.0) || !(cell.size.y() > 0.0) || !cell.corner.allFinite() ||
      !cell.size.allFinite())
    throw std::invalid_argument("grid cell: finite corner and positive size required");
}

inline void check_config(const DecoderConfig& cfg) {
  if (cfg.k < 3)
    throw std::invalid_argument("decoder config: k >= 3 required, got " + std::to_string(cfg.k));
  if (!(cfg.mu > 0.0) || !std::isfinite(cfg.mu))
    throw std::invalid_argument("decoder config: mu must be positive and finite");
}

}  // namespace detail

// o = corner + size .* sigmoid(f); always strictly inside the cell.
template <typename S>
Vec2<S> decode_origin(const S& f0, const S& f1, const GridCell& cell) {
  detail::check_cell(cell);
  Vec2<S> o;
  o.x() = S(cell.corner.x()) + S(cell.size.x()) * detail::logistic(detail::clamp_logit(f0, kSigmoidLogitClamp));
  o.y() = S(cell.corner.y()) + S(cell.size.y()) * detail::logistic(detail::clamp_logit(f1, kSigmoidLogitClamp));
  return o;
}

// r_i = mu * exp(f_i).
template <typename S>
VecX<S> decode_radii(const VecX<S>& f, double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw std::invalid_argument("decode_radii: mu must be positive and finite");
  using std::exp;
  VecX<S> r(f.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    r[i] = S(mu) * exp(detail::clamp_logit(f[i], kExpLogitClamp));
    if (!std::isfinite(value_of(r[i])))
      throw NumericalError("decode_radii: radius overflow at index " + std::to_string(i));
  }
  return r;
}

// a_i = 2*pi * cumsum(softmax(f))_i; strictly increasing, a_{k-1} = 2*pi
// exactly. The softmax is shifted by max(f) (a constant, so gradients are
// untouched) and floored by kAngleWeightFloor for numeric strictness.
template <typename S>
VecX<S> decode_angles_cumsum(const VecX<S>& f) {
  const Eigen::Index k = f.size();
  if (k < 1) throw std::invalid_argument("decode_angles_cumsum: empty input");
  using std::exp;
  double shift = value_of(f[0]);
  for (Eigen::Index i = 1; i < k; ++i) shift = std::max(shift, value_of(f[i]));

  VecX<S> w(k);
  for (Eigen::Index i = 0; i < k; ++i)
    w[i] = exp(detail::clamp_logit(f[i] - S(shift), kExpLogitClamp));
  S t = w[0];
  for (Eigen::Index i = 1; i < k; ++i) t = t + w[i];

  const double floor_term = kAngleWeightFloor / static_cast<double>(k);
  const double keep = 1.0 - kAngleWeightFloor;
  VecX<S> cum(k);
  S run = S(0.0);
  for (Eigen::Index i = 0; i < k; ++i) {
    const S p = S(keep) * (w[i] / t) + S(floor_term);
    run = run + p;
    cum[i] = run;
  }
  const S total = cum[k - 1];
  VecX<S> a(k);
  for (Eigen::Index i = 0; i < k; ++i) a[i] = (cum[i] / total) * S(kTwoPi);
  return a;
}

// Ablation decoder: a_i = (2*pi/k) * (i + sigmoid(f_i)), each vertex pinned
// to its own uniform bin.
template <typename S>
VecX<S> decode_angles_bin_offset(const VecX<S>& f) {
  const Eigen::Index k = f.size();
  if (k < 1) throw std::invalid_argument("decode_angles_bin_offset: empty input");
  const double bin = kTwoPi / static_cast<double>(k);
  VecX<S> a(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const S s = detail::logistic(detail::clamp_logit(f[i], kSigmoidLogitClamp));
    a[i] = S(bin) * (S(static_cast<double>(i)) + s);
  }
  return a;
}

// Full decode. Total over finite inputs of the right length: the result
// always satisfies the PolarPolygon invariants.
template <typename S>
PolarPolygon<S> decode(const VecX<S>& f, const GridCell& cell, const DecoderConfig& cfg) {
  detail::check_config(cfg);
  if (f.size() != regression_size(cfg.k))
    throw std::invalid_argument("decode: expected vector of length " +
                                std::to_string(regression_size(cfg.k)) + ", got " +
                                std::to_string(f.size()));
  for (Eigen::Index i = 0; i < f.size(); ++i)
    if (!std::isfinite(value_of(f[i])))
      throw std::invalid_argument("decode: non-finite component at index " + std::to_string(i));

  const Vec2<S> origin = decode_origin(f[0], f[1], cell);
  VecX<S> rl(cfg.k), al(cfg.k);
  for (int i = 0; i < cfg.k; ++i) {
    rl[i] = f[2 + i];
    al[i] = f[2 + cfg.k + i];
  }
  VecX<S> radii = decode_radii(rl, cfg.mu);
  VecX<S> angles = cfg.angle_mode == AngleMode::kCumsum ? decode_angles_cumsum(al)
                                                        : decode_angles_bin_offset(al);
  if (cfg.angle_mode == AngleMode::kCumsum) {
    // Storage convention: the cumulative decoder ends at exactly 2*pi; nudge
    // the last vertex just below so the strict [0, 2pi) invariant holds.
    angles[cfg.k - 1] = angles[cfg.k - 1] * S(1.0 - std::numeric_limits<double>::epsilon());
  }
  return PolarPolygon<S>(origin, std::move(angles), std::move(radii));
}

// Builds the training target for a polygon: area centroid as origin and a
// dense profile along half-bin ray centers (phase pi/m, so m=4 rays sit at
// pi/4, 3pi/4, ...). Errors if the centroid falls outside the polygon.
std::pair<Vec2d, RadialProfiled> encode_ground_truth(const CartesianPolygon& gt, int m);

}  // namespace polarpoly
