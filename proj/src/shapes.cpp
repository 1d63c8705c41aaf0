#include "polarpoly/shapes.hpp"

#include <cmath>

namespace polarpoly {

CartesianPolygon make_star(int points, double outer, double inner, const Vec2d& center,
                           double rot) {
  if (points < 3) throw std::invalid_argument("make_star: points >= 3 required");
  if (!(outer > inner) || !(inner > 0.0))
    throw std::invalid_argument("make_star: outer > inner > 0 required");
  std::vector<Vec2d> v;
  v.reserve(static_cast<std::size_t>(2 * points));
  for (int i = 0; i < 2 * points; ++i) {
    const double a = rot + kPi * static_cast<double>(i) / static_cast<double>(points);
    const double r = (i % 2 == 0) ? outer : inner;
    v.emplace_back(center.x() + r * std::cos(a), center.y() + r * std::sin(a));
  }
  return CartesianPolygon(std::move(v));
}

CartesianPolygon make_lshape(double wx, double wy, double tx, double ty, const Vec2d& corner) {
  if (!(wx > tx) || !(wy > ty) || !(tx > 0.0) || !(ty > 0.0))
    throw std::invalid_argument("make_lshape: need 0 < tx < wx and 0 < ty < wy");
  const double x0 = corner.x(), y0 = corner.y();
  return CartesianPolygon({{x0, y0},
                           {x0 + wx, y0},
                           {x0 + wx, y0 + ty},
                           {x0 + tx, y0 + ty},
                           {x0 + tx, y0 + wy},
                           {x0, y0 + wy}});
}

CartesianPolygon make_zigzag_band() {
  // Radial sawtooth on an elongated oval. Parameters frozen after checking
  // that the shape is star-shaped about its center and that the fixed-angle
  // ablation needs a large vertex budget to match the deformable decoder.
  const int n = 28;           // vertices (even, so teeth alternate cleanly)
  const double a = 2.6;       // semi-major axis
  const double b = 0.24;      // semi-minor axis
  const double tooth = 0.05;  // sawtooth amplitude as a radius fraction
  const Vec2d center(3.0, 1.0);
  std::vector<Vec2d> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double t = 0.04 + kTwoPi * static_cast<double>(i) / static_cast<double>(n);
    const double oval =
        a * b / std::sqrt(b * b * std::cos(t) * std::cos(t) + a * a * std::sin(t) * std::sin(t));
    const double r = oval * (1.0 + (i % 2 == 0 ? tooth : -tooth));
    v.emplace_back(center.x() + r * std::cos(t), center.y() + r * std::sin(t));
  }
  return CartesianPolygon(std::move(v));
}

CartesianPolygon make_regular_polygon(int k, double radius, const Vec2d& center, double rot) {
  if (k < 3) throw std::invalid_argument("make_regular_polygon: k >= 3 required");
  std::vector<Vec2d> v;
  v.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double a = rot + kTwoPi * static_cast<double>(i) / static_cast<double>(k);
    v.emplace_back(center.x() + radius * std::cos(a), center.y() + radius * std::sin(a));
  }
  return CartesianPolygon(std::move(v));
}

namespace {

// k strictly increasing angles in [0, 2pi) with a guaranteed minimum gap,
// randomly rotated. Gap_i proportional to 0.05 + U(0,1); gap sets whose
// largest share reaches 0.475 of the circle are redrawn, since a gap of pi
// or more would put the origin outside the polygon (relevant for small k).
VecX<double> random_sorted_angles(std::mt19937_64& rng, int k) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> gap(static_cast<std::size_t>(k));
  double sum = 0.0;
  double biggest = 0.0;
  do {
    sum = 0.0;
    biggest = 0.0;
    for (double& g : gap) {
      g = 0.05 + u(rng);
      sum += g;
      biggest = std::max(biggest, g);
    }
  } while (biggest >= 0.475 * sum);
  const double offset = kTwoPi * u(rng);
  std::vector<double> a(static_cast<std::size_t>(k));
  double run = 0.0;
  for (int i = 0; i < k; ++i) {
    a[static_cast<std::size_t>(i)] = normalize_angle(offset + kTwoPi * run / sum);
    run += gap[static_cast<std::size_t>(i)];
  }
  // Rotate so the list is ascending (normalize_angle wraps once).
  int start = 0;
  for (int i = 1; i < k; ++i)
    if (a[static_cast<std::size_t>(i)] < a[static_cast<std::size_t>(start)]) start = i;
  VecX<double> out(k);
  for (int i = 0; i < k; ++i) out[i] = a[static_cast<std::size_t>((start + i) % k)];
  return out;
}

}  // namespace

PolarPolygond random_star_polygon(std::mt19937_64& rng, int k, bool concave) {
  if (k < 3) throw std::invalid_argument("random_star_polygon: k >= 3 required");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  VecX<double> angles = random_sorted_angles(rng, k);
  VecX<double> radii(k);
  if (concave) {
    for (int i = 0; i < k; ++i) radii[i] = 0.4 + 1.6 * u(rng);
  } else {
    const double ea = 0.5 + 1.5 * u(rng);
    const double eb = 0.5 + 1.5 * u(rng);
    for (int i = 0; i < k; ++i) {
      const double c = std::cos(angles[i]), s = std::sin(angles[i]);
      radii[i] = ea * eb / std::sqrt(eb * eb * c * c + ea * ea * s * s);
    }
  }
  const Vec2d origin(2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0);
  return PolarPolygond(origin, std::move(angles), std::move(radii));
}

CartesianPolygon random_convex_polygon(std::mt19937_64& rng, int k) {
  // Vertices in angular order on a random rotated ellipse: convex with
  // exactly k vertices.
  if (k < 3) throw std::invalid_argument("random_convex_polygon: k >= 3 required");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const VecX<double> t = random_sorted_angles(rng, k);
  const double ea = 0.5 + 1.5 * u(rng);
  const double eb = 0.5 + 1.5 * u(rng);
  const double rot = kTwoPi * u(rng);
  const Vec2d center(2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0);
  const double cr = std::cos(rot), sr = std::sin(rot);
  std::vector<Vec2d> v;
  v.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const double px = ea * std::cos(t[i]);
    const double py = eb * std::sin(t[i]);
    v.emplace_back(center.x() + cr * px - sr * py, center.y() + sr * px + cr * py);
  }
  return CartesianPolygon(std::move(v));
}

CartesianPolygon random_lshape(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const double wx = 2.0 + 2.0 * u(rng);
    const double wy = 2.0 + 2.0 * u(rng);
    const double tx = (0.40 + 0.15 * u(rng)) * wx;
    const double ty = (0.40 + 0.15 * u(rng)) * wy;
    const Vec2d corner(4.0 * u(rng) - 2.0, 4.0 * u(rng) - 2.0);
    CartesianPolygon poly = make_lshape(wx, wy, tx, ty, corner);
    // Keep the centroid strictly inside the corner kernel (the [0,tx]x[0,ty]
    // square), where the whole boundary is visible from it.
    const Vec2d c = geometric_centroid(poly);
    const double margin = 0.02 * std::min(wx, wy);
    if (c.x() > corner.x() + margin && c.x() < corner.x() + tx - margin &&
        c.y() > corner.y() + margin && c.y() < corner.y() + ty - margin)
      return poly;
  }
  throw NumericalError("random_lshape: could not place centroid in the kernel");
}

}  // namespace polarpoly
