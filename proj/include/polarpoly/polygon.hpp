// Polygon types and core planar operations.
//
// CartesianPolygon is a validated simple polygon in vertex-list form (the
// ground-truth side, always double). PolarPolygon is the regression-friendly
// form: an origin plus (angle, radius) vertices sorted counter-clockwise,
// templated on the scalar so the decoded prediction can carry autodiff
// variables.
#pragma once

#include "polarpoly/common.hpp"

#include <optional>
#include <sstream>
#include <utility>
#include <vector>

namespace polarpoly {

struct BoundingBox {
  Vec2d min;
  Vec2d max;

  Vec2d center() const { return 0.5 * (min + max); }
  double width() const { return max.x() - min.x(); }
  double height() const { return max.y() - min.y(); }
};

class CartesianPolygon {
 public:
  // Validates: >= 3 vertices, no cyclically-consecutive duplicates within
  // kDegenerateTol, nonzero signed area.
  explicit CartesianPolygon(std::vector<Vec2d> vertices)
      : vertices_(std::move(vertices)) {
    if (vertices_.size() < 3)
      throw std::invalid_argument("polygon: vertices length >= 3 required, got " +
                                  std::to_string(vertices_.size()));
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2d& a = vertices_[i];
      const Vec2d& b = vertices_[(i + 1) % n];
      if ((a - b).norm() <= kDegenerateTol) {
        std::ostringstream msg;
        msg << "polygon: duplicate consecutive vertices at index " << i;
        throw std::invalid_argument(msg.str());
      }
    }
    if (shoelace() == 0.0)
      throw std::invalid_argument("polygon: zero signed area (degenerate)");
  }

  std::size_t size() const { return vertices_.size(); }
  const Vec2d& vertex(std::size_t i) const { return vertices_[i]; }
  const std::vector<Vec2d>& vertices() const { return vertices_; }

  // Same polygon with reversed orientation.
  CartesianPolygon reversed() const {
    return CartesianPolygon(std::vector<Vec2d>(vertices_.rbegin(), vertices_.rend()));
  }

  double shoelace() const {  // twice the signed area
    double s = 0.0;
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2d& a = vertices_[i];
      const Vec2d& b = vertices_[(i + 1) % n];
      s += a.x() * b.y() - b.x() * a.y();
    }
    return s;
  }

 private:
  std::vector<Vec2d> vertices_;
};

template <typename S>
struct PolarVertex {
  S angle;
  S radius;
};

// Star-shaped polygon about `origin`: angles strictly increasing in [0, 2pi),
// radii strictly positive. Invariant checks read plain values only, so the
// autodiff instantiation never records validation arithmetic.
template <typename S>
class PolarPolygon {
 public:
  PolarPolygon(Vec2<S> origin, VecX<S> angles, VecX<S> radii)
      : origin_(std::move(origin)), angles_(std::move(angles)), radii_(std::move(radii)) {
    if (angles_.size() != radii_.size())
      throw std::invalid_argument("polar polygon: angle/radius count mismatch");
    if (angles_.size() < 3)
      throw std::invalid_argument("polar polygon: vertices length >= 3 required, got " +
                                  std::to_string(angles_.size()));
    for (Eigen::Index i = 0; i < angles_.size(); ++i) {
      const double a = value_of(angles_[i]);
      if (!(a >= 0.0) || a >= kTwoPi)
        throw std::invalid_argument("polar polygon: angle out of [0, 2pi) at index " +
                                    std::to_string(i));
      if (!(value_of(radii_[i]) > 0.0))
        throw std::invalid_argument("polar polygon: nonpositive radius at index " +
                                    std::to_string(i));
      if (i > 0 && !(value_of(angles_[i - 1]) < a))
        throw std::invalid_argument(
            "polar polygon: angles not strictly increasing at index " + std::to_string(i));
    }
  }

  Eigen::Index size() const { return angles_.size(); }
  const Vec2<S>& origin() const { return origin_; }
  const VecX<S>& angles() const { return angles_; }
  const VecX<S>& radii() const { return radii_; }
  PolarVertex<S> vertex(Eigen::Index i) const { return {angles_[i], radii_[i]}; }

 private:
  Vec2<S> origin_;
  VecX<S> angles_;
  VecX<S> radii_;
};

using PolarPolygond = PolarPolygon<double>;

inline double signed_area(const CartesianPolygon& poly) { return 0.5 * poly.shoelace(); }

inline Vec2d vertex_mean(const CartesianPolygon& poly) {
  Vec2d s = Vec2d::Zero();
  for (const Vec2d& v : poly.vertices()) s += v;
  return s / static_cast<double>(poly.size());
}

// Area centroid (shoelace form); independent of orientation and of which
// vertex starts the list.
inline Vec2d geometric_centroid(const CartesianPolygon& poly) {
  const double a2 = poly.shoelace();
  if (a2 == 0.0) throw std::invalid_argument("centroid: zero-area polygon");
  double cx = 0.0, cy = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2d& p = poly.vertex(i);
    const Vec2d& q = poly.vertex((i + 1) % n);
    const double cross = p.x() * q.y() - q.x() * p.y();
    cx += (p.x() + q.x()) * cross;
    cy += (p.y() + q.y()) * cross;
  }
  return Vec2d(cx, cy) / (3.0 * a2);
}

inline BoundingBox bounding_box(const CartesianPolygon& poly) {
  Vec2d lo = poly.vertex(0), hi = poly.vertex(0);
  for (const Vec2d& v : poly.vertices()) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

namespace detail {
inline double point_segment_distance(const Vec2d& p, const Vec2d& a, const Vec2d& b) {
  const Vec2d ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  double t = (p - a).dot(ab) / len2;
  t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
  return (p - (a + t * ab)).norm();
}
}  // namespace detail

// Even-odd rule; points within `tol` of the boundary count as inside.
inline bool point_in_polygon(const Vec2d& p, const CartesianPolygon& poly,
                             double tol = kDegenerateTol) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (detail::point_segment_distance(p, poly.vertex(i), poly.vertex((i + 1) % n)) <= tol)
      return true;
  }
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2d& a = poly.vertex(i);
    const Vec2d& b = poly.vertex((i + 1) % n);
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x_cross = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

// Converts to polar form about `origin`. The Cartesian traversal must already
// be cyclically monotone in angle about the origin (the polygon is
// star-shaped there and the origin off every vertex); a clockwise traversal
// is accepted and reversed. Anything else is an error, never a silent sort.
inline PolarPolygond to_polar(const CartesianPolygon& poly, const Vec2d& origin) {
  if (!point_in_polygon(origin, poly))
    throw std::invalid_argument("to_polar: origin lies outside the polygon");
  const std::size_t n = poly.size();
  std::vector<double> angle(n), radius(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2d d = poly.vertex(i) - origin;
    radius[i] = d.norm();
    if (radius[i] <= kDegenerateTol)
      throw std::invalid_argument("to_polar: origin coincides with vertex " +
                                  std::to_string(i));
    angle[i] = normalize_angle(std::atan2(d.y(), d.x()));
  }
  // Exactly one cyclic descent <=> counter-clockwise star order; one ascent
  // <=> clockwise. Equal adjacent angles mean a ray through two vertices.
  std::size_t descents = 0, ascents = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = angle[i], b = angle[(i + 1) % n];
    if (a == b)
      throw std::invalid_argument("to_polar: two vertices share the angle " +
                                  std::to_string(a) + " (not star-shaped)");
    (b < a ? descents : ascents) += 1;
  }
  std::vector<std::size_t> order(n);
  if (descents == 1) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
  } else if (ascents == 1) {
    for (std::size_t i = 0; i < n; ++i) order[i] = n - 1 - i;
  } else {
    throw std::invalid_argument(
        "to_polar: vertex angles are not cyclically monotone about the origin "
        "(polygon is not star-shaped there)");
  }
  // Rotate so angles start at the minimum.
  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (angle[order[i]] < angle[order[start]]) start = i;
  VecX<double> out_a(n), out_r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t src = order[(start + i) % n];
    out_a[static_cast<Eigen::Index>(i)] = angle[src];
    out_r[static_cast<Eigen::Index>(i)] = radius[src];
  }
  return PolarPolygond(origin, std::move(out_a), std::move(out_r));
}

inline CartesianPolygon to_cartesian(const PolarPolygond& poly) {
  std::vector<Vec2d> verts;
  verts.reserve(static_cast<std::size_t>(poly.size()));
  for (Eigen::Index i = 0; i < poly.size(); ++i) {
    const double a = poly.angles()[i];
    const double r = poly.radii()[i];
    verts.push_back(poly.origin() + r * Vec2d(std::cos(a), std::sin(a)));
  }
  return CartesianPolygon(std::move(verts));
}

}  // namespace polarpoly
