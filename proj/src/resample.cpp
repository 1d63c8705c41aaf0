#include "polarpoly/resample.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace polarpoly {

std::optional<RaySegmentHit> ray_segment_intersect(const Vec2d& origin, double theta,
                                                   const Vec2d& a, const Vec2d& b) {
  const Vec2d v1(std::cos(theta), std::sin(theta));
  const Vec2d v2 = b - a;
  const Vec2d v3(-v1.y(), v1.x());
  const Vec2d v4 = origin - a;
  const double den = v2.dot(v3);
  if (std::fabs(den) < kDegenerateTol) return std::nullopt;
  const double t1 = (v2.x() * v4.y() - v2.y() * v4.x()) / den;
  const double t2 = v4.dot(v3) / den;
  if (t1 < 0.0 || t2 < 0.0 || t2 > 1.0) return std::nullopt;
  return RaySegmentHit{t1, t2, origin + t1 * v1};
}

namespace {

// Shared sweep for the vector route and the LU oracle; `solve` returns the
// (t1, t2) pair for one ray/edge pair or nothing when near-parallel.
template <typename Solver>
RadialProfiled sweep_edges(const CartesianPolygon& poly, const Vec2d& origin, int m,
                           double phase, const char* what, Solver&& solve) {
  if (m < 3) throw std::invalid_argument("resample: m >= 3 required, got " + std::to_string(m));
  if (!point_in_polygon(origin, poly))
    throw std::invalid_argument(std::string(what) + ": origin lies outside the polygon");
  const double ph = normalize_angle(phase);
  const std::size_t n = poly.size();
  VecX<double> radii(m);
  for (int j = 0; j < m; ++j) {
    const double theta = ph + kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto hit = solve(origin, theta, poly.vertex(i), poly.vertex((i + 1) % n));
      if (hit && hit->first > best) best = hit->first;
    }
    if (best < 0.0) {
      std::ostringstream msg;
      msg << what << ": ray " << j << " (theta=" << theta
          << ") does not hit the boundary; origin outside or polygon degenerate";
      throw std::invalid_argument(msg.str());
    }
    radii[j] = best;
  }
  return RadialProfiled(origin, ph, std::move(radii));
}

}  // namespace

RadialProfiled resample_vector(const CartesianPolygon& poly, const Vec2d& origin, int m,
                               double phase) {
  return sweep_edges(poly, origin, m, phase, "resample_vector",
                     [](const Vec2d& o, double theta, const Vec2d& a,
                        const Vec2d& b) -> std::optional<std::pair<double, double>> {
                       const auto hit = ray_segment_intersect(o, theta, a, b);
                       if (!hit) return std::nullopt;
                       return std::make_pair(hit->t1, hit->t2);
                     });
}

RadialProfiled resample_oracle(const CartesianPolygon& poly, const Vec2d& origin, int m,
                               double phase) {
  return sweep_edges(
      poly, origin, m, phase, "resample_oracle",
      [](const Vec2d& o, double theta, const Vec2d& a,
         const Vec2d& b) -> std::optional<std::pair<double, double>> {
        // origin + t1 d = a + t2 e, solved as M [t1 t2]^T = a - o.
        const Vec2d d(std::cos(theta), std::sin(theta));
        const Vec2d e = b - a;
        Eigen::Matrix2d M;
        M << d.x(), -e.x(), d.y(), -e.y();
        if (std::fabs(M.determinant()) < kDegenerateTol) return std::nullopt;
        const Vec2d t = M.fullPivLu().solve((a - o).eval());
        if (t[0] < 0.0 || t[1] < 0.0 || t[1] > 1.0) return std::nullopt;
        return std::make_pair(t[0], t[1]);
      });
}

std::vector<RadialProfiled> resample_batch(
    const std::vector<std::pair<CartesianPolygon, Vec2d>>& items, int m, double phase) {
  std::vector<RadialProfiled> out;
  out.reserve(items.size());
  for (std::size_t i = 0; i < items.size(); ++i) {
    try {
      out.push_back(resample_vector(items[i].first, items[i].second, m, phase));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("resample_batch item " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace polarpoly
