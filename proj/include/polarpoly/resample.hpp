// Dense radial resampling: converting a polygon boundary into radii along m
// uniformly spaced rays from an origin.
//
// Two routes exist on purpose. The triangle route works on an angle-sorted
// PolarPolygon, brackets each ray between two vertices with one linear merge
// and interpolates inside the triangle; it is the differentiable path. The
// vector route intersects each ray against every Cartesian edge with a
// cross/dot form of the 2x2 ray-segment system and keeps the outermost hit;
// it handles concave star shapes and is the ground-truth path. A third
// implementation, resample_oracle, solves the same 2x2 system with Eigen's
// FullPivLU and exists so tests can cross-validate both hand-derived routes.
#pragma once

#include "polarpoly/common.hpp"
#include "polarpoly/polygon.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace polarpoly {

// Radii sampled at ray angles phase + 2*pi*j/m, j = 0..m-1.
template <typename S>
class RadialProfile {
 public:
  RadialProfile(Vec2<S> origin, double phase, VecX<S> radii)
      : origin_(std::move(origin)), phase_(normalize_angle(phase)), radii_(std::move(radii)) {
    if (radii_.size() < 3)
      throw std::invalid_argument("radial profile: m >= 3 required, got " +
                                  std::to_string(radii_.size()));
    for (Eigen::Index i = 0; i < radii_.size(); ++i)
      if (!(value_of(radii_[i]) > 0.0))
        throw std::invalid_argument("radial profile: nonpositive radius at ray " +
                                    std::to_string(i));
  }

  Eigen::Index size() const { return radii_.size(); }
  const Vec2<S>& origin() const { return origin_; }
  double phase() const { return phase_; }
  const VecX<S>& radii() const { return radii_; }
  double ray_angle(Eigen::Index j) const {
    return phase_ + kTwoPi * static_cast<double>(j) / static_cast<double>(radii_.size());
  }

 private:
  Vec2<S> origin_;
  double phase_;
  VecX<S> radii_;
};

using RadialProfiled = RadialProfile<double>;

// Which pair of polygon vertices encloses a ray. `exact >= 0` marks a ray
// coincident with that vertex (within kDegenerateTol radians); otherwise the
// ray lies strictly between vertices prev and next, whose effective angles
// are angle[v] + wrap * 2pi.
struct RayBracket {
  int prev = -1;
  int next = -1;
  int prev_wrap = 0;
  int next_wrap = 0;
  int exact = -1;
};

// One pass over rays and vertices in ascending angle, O(k + m). `va` must be
// strictly increasing inside [0, 2pi); `phase` must already be normalized.
inline std::vector<RayBracket> compute_ray_brackets(const std::vector<double>& va, int m,
                                                    double phase) {
  const int k = static_cast<int>(va.size());
  // Vertex list unrolled across enough periods to cover theta in [0, 4pi).
  struct Entry {
    int index;
    int wrap;
    double eff;
  };
  std::vector<Entry> ext;
  ext.reserve(static_cast<std::size_t>(2 * k + 2));
  ext.push_back({k - 1, -1, va[static_cast<std::size_t>(k - 1)] - kTwoPi});
  for (int w = 0; w <= 1; ++w)
    for (int i = 0; i < k; ++i)
      ext.push_back({i, w, va[static_cast<std::size_t>(i)] + kTwoPi * w});
  ext.push_back({0, 2, va[0] + 2.0 * kTwoPi});

  std::vector<RayBracket> out(static_cast<std::size_t>(m));
  std::size_t p = 0;
  for (int j = 0; j < m; ++j) {
    const double theta = phase + kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    while (p + 1 < ext.size() && ext[p + 1].eff <= theta) ++p;
    RayBracket& br = out[static_cast<std::size_t>(j)];
    br.prev = ext[p].index;
    br.prev_wrap = ext[p].wrap;
    br.next = ext[p + 1].index;
    br.next_wrap = ext[p + 1].wrap;
    if (theta - ext[p].eff < kDegenerateTol)
      br.exact = ext[p].index;
    else if (ext[p + 1].eff - theta < kDegenerateTol)
      br.exact = ext[p + 1].index;
  }
  return out;
}

// Triangle route: for a ray between vertices A and B, the intersection point
// divides AB as P = (A + w B) / (1 + w) with w = |OA| sin(alpha) / (|OB| sin(beta)),
// alpha and beta the angles from A to the ray and from the ray to B. Rays
// coincident with a vertex return that vertex's radius exactly. Requires the
// polygon to be star-shaped about its origin; an edge subtending pi or more
// makes that impossible and is rejected.
template <typename S>
RadialProfile<S> resample_triangle(const PolarPolygon<S>& poly, int m, double phase = 0.0) {
  if (m < 3) throw std::invalid_argument("resample: m >= 3 required, got " + std::to_string(m));
  const double ph = normalize_angle(phase);
  const Eigen::Index k = poly.size();
  std::vector<double> va(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) va[static_cast<std::size_t>(i)] = value_of(poly.angles()[i]);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double gap = i + 1 < k ? va[static_cast<std::size_t>(i + 1)] - va[static_cast<std::size_t>(i)]
                                 : va[0] + kTwoPi - va[static_cast<std::size_t>(k - 1)];
    if (gap >= kPi)
      throw std::invalid_argument(
          "resample: adjacent vertices subtend >= pi about the origin (polygon is "
          "not star-shaped there), gap after vertex " + std::to_string(i));
  }

  const std::vector<RayBracket> brackets = compute_ray_brackets(va, m, ph);
  VecX<S> radii(m);
  for (int j = 0; j < m; ++j) {
    const RayBracket& br = brackets[static_cast<std::size_t>(j)];
    if (br.exact >= 0) {
      radii[j] = poly.radii()[br.exact];
      continue;
    }
    const double theta = ph + kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    using std::cos;
    using std::sin;
    using std::sqrt;
    S a_prev = poly.angles()[br.prev];
    if (br.prev_wrap != 0) a_prev = a_prev + S(br.prev_wrap * kTwoPi);
    S a_next = poly.angles()[br.next];
    if (br.next_wrap != 0) a_next = a_next + S(br.next_wrap * kTwoPi);
    const S& ra = poly.radii()[br.prev];
    const S& rb = poly.radii()[br.next];

    const S alpha = S(theta) - a_prev;
    const S beta = a_next - S(theta);
    const S w = (ra * sin(alpha)) / (rb * sin(beta));
    const S ax = ra * cos(a_prev);
    const S ay = ra * sin(a_prev);
    const S bx = rb * cos(a_next);
    const S by = rb * sin(a_next);
    const S px = (ax + w * bx) / (S(1.0) + w);
    const S py = (ay + w * by) / (S(1.0) + w);
    radii[j] = sqrt(px * px + py * py);
  }
  return RadialProfile<S>(poly.origin(), ph, std::move(radii));
}

struct RaySegmentHit {
  double t1;    // distance along the ray (the ray direction is unit length)
  double t2;    // position along the segment, 0 at a, 1 at b
  Vec2d point;
};

// Ray from `origin` at angle `theta` against segment a-b, via the cross/dot
// arrangement of the 2x2 system  origin + t1 v1 = a + t2 v2:
//   v1 = (cos theta, sin theta), v2 = b - a, v3 = (-v1.y, v1.x), v4 = origin - a
//   t1 = (v2 x v4) / (v2 . v3),  t2 = (v4 . v3) / (v2 . v3)
// The cross in t1 is signed; taking its magnitude would turn rays pointing
// away from the segment into false hits. Near-parallel pairs
// (|v2 . v3| < kDegenerateTol) report no hit.
std::optional<RaySegmentHit> ray_segment_intersect(const Vec2d& origin, double theta,
                                                   const Vec2d& a, const Vec2d& b);

// Vector route: every edge is tested per ray and the outermost hit (largest
// t1) wins, which resolves concave star shapes. Origin must lie inside.
RadialProfiled resample_vector(const CartesianPolygon& poly, const Vec2d& origin, int m,
                               double phase = 0.0);

// Reference implementation: identical ray/edge sweep, but each intersection
// solves the 2x2 linear system with Eigen's FullPivLU instead of the
// hand-derived cross/dot form. Kept independent so it can arbitrate.
RadialProfiled resample_oracle(const CartesianPolygon& poly, const Vec2d& origin, int m,
                               double phase = 0.0);

// Sequential per-element resampling; element errors are reported with their
// index. Bit-identical to calling resample_vector in a loop.
std::vector<RadialProfiled> resample_batch(
    const std::vector<std::pair<CartesianPolygon, Vec2d>>& items, int m, double phase = 0.0);

}  // namespace polarpoly
