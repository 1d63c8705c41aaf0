#include "doctest.h"

#include "polarpoly/polygon.hpp"
#include "polarpoly/shapes.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace polarpoly;

namespace {

CartesianPolygon unit_square() {
  return CartesianPolygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
}

// 2x2 square with the top-right unit square removed.
CartesianPolygon fat_lshape() {
  return CartesianPolygon({{0.0, 0.0}, {2.0, 0.0}, {2.0, 1.0}, {1.0, 1.0}, {1.0, 2.0}, {0.0, 2.0}});
}

// 3x3 arms of thickness 1: both the bbox center and the centroid fall in the
// notch.
CartesianPolygon thin_lshape() {
  return CartesianPolygon({{0.0, 0.0}, {3.0, 0.0}, {3.0, 1.0}, {1.0, 1.0}, {1.0, 3.0}, {0.0, 3.0}});
}

// Signed-angle winding number, an independent containment oracle for points
// off the boundary of a simple polygon.
bool winding_inside(const Vec2d& p, const CartesianPolygon& poly) {
  double total = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2d a = poly.vertex(i) - p;
    const Vec2d b = poly.vertex((i + 1) % n) - p;
    total += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
  }
  return std::fabs(total) > kPi;  // ~2pi inside, ~0 outside
}

double boundary_distance(const Vec2d& p, const CartesianPolygon& poly) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, detail::point_segment_distance(p, poly.vertex(i),
                                                         poly.vertex((i + 1) % n)));
  return best;
}

}  // namespace

TEST_CASE("polygon validation rejects degenerate input") {
  CHECK_THROWS_WITH_AS(CartesianPolygon({{0.0, 0.0}, {1.0, 0.0}}),
                       doctest::Contains("vertices length >= 3"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(CartesianPolygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1e-14}}),
                       doctest::Contains("duplicate consecutive"), std::invalid_argument);
  // Collinear points enclose no area.
  CHECK_THROWS_WITH_AS(CartesianPolygon({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}),
                       doctest::Contains("zero signed area"), std::invalid_argument);
}

TEST_CASE("signed area and vertex mean") {
  const CartesianPolygon sq = unit_square();
  CHECK(signed_area(sq) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(signed_area(sq.reversed()) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(vertex_mean(sq).x() == doctest::Approx(0.5));
  CHECK(vertex_mean(sq).y() == doctest::Approx(0.5));
  CHECK(signed_area(fat_lshape()) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("centroid matches the decomposition value and a Monte Carlo oracle") {
  const CartesianPolygon L = fat_lshape();
  // Rectangles [0,2]x[0,1] and [0,1]x[1,2]: centroid (2*1 + 1*0.5)/3 on both
  // axes by symmetry.
  const Vec2d c = geometric_centroid(L);
  CHECK(c.x() == doctest::Approx(2.5 / 3.0).epsilon(1e-14));
  CHECK(c.y() == doctest::Approx(2.5 / 3.0).epsilon(1e-14));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ux(0.0, 2.0);
  Vec2d acc = Vec2d::Zero();
  long hits = 0;
  for (int i = 0; i < 1000000; ++i) {
    const Vec2d p(ux(rng), ux(rng));
    if (point_in_polygon(p, L)) {
      acc += p;
      ++hits;
    }
  }
  REQUIRE(hits > 0);
  const Vec2d mc = acc / static_cast<double>(hits);
  CHECK(std::fabs(mc.x() - c.x()) < 1e-2);
  CHECK(std::fabs(mc.y() - c.y()) < 1e-2);
  // Area estimate falls out of the same samples.
  CHECK(std::fabs(4.0 * static_cast<double>(hits) / 1e6 - 3.0) < 1e-2);
}

TEST_CASE("centroid is invariant to orientation and starting vertex") {
  const CartesianPolygon L = fat_lshape();
  const Vec2d c = geometric_centroid(L);
  const Vec2d cr = geometric_centroid(L.reversed());
  CHECK(std::fabs(c.x() - cr.x()) < 1e-14);
  CHECK(std::fabs(c.y() - cr.y()) < 1e-14);
  std::vector<Vec2d> rotated(L.vertices().begin() + 2, L.vertices().end());
  rotated.insert(rotated.end(), L.vertices().begin(), L.vertices().begin() + 2);
  const Vec2d cs = geometric_centroid(CartesianPolygon(rotated));
  CHECK(std::fabs(c.x() - cs.x()) < 1e-14);
  CHECK(std::fabs(c.y() - cs.y()) < 1e-14);
}

TEST_CASE("bounding box") {
  const BoundingBox bb = bounding_box(fat_lshape());
  CHECK(bb.min.x() == 0.0);
  CHECK(bb.min.y() == 0.0);
  CHECK(bb.max.x() == 2.0);
  CHECK(bb.max.y() == 2.0);
  CHECK(bb.center().x() == 1.0);
  CHECK(bb.width() == 2.0);
  CHECK(bb.height() == 2.0);
}

TEST_CASE("point_in_polygon basics and boundary inclusion") {
  const CartesianPolygon sq = unit_square();
  CHECK(point_in_polygon(Vec2d(0.5, 0.5), sq));
  CHECK_FALSE(point_in_polygon(Vec2d(1.5, 0.5), sq));
  CHECK(point_in_polygon(Vec2d(1.0, 0.5), sq));  // on an edge
  CHECK(point_in_polygon(Vec2d(0.0, 0.0), sq));  // on a vertex

  const CartesianPolygon L = thin_lshape();
  const Vec2d bbox_center = bounding_box(L).center();
  CHECK(bbox_center.x() == 1.5);
  CHECK_FALSE(point_in_polygon(bbox_center, L));  // the notch
  // This L is thin enough that even the area centroid sits in the notch.
  CHECK_FALSE(point_in_polygon(geometric_centroid(L), L));
  CHECK(point_in_polygon(Vec2d(0.5, 0.5), L));
}

TEST_CASE("point_in_polygon agrees with a winding-number oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int compared = 0;
  for (int t = 0; t < 200; ++t) {
    const PolarPolygond star = random_star_polygon(rng, 3 + static_cast<int>(rng() % 14));
    const CartesianPolygon poly = to_cartesian(star);
    const BoundingBox bb = bounding_box(poly);
    for (int s = 0; s < 50; ++s) {
      const Vec2d p(bb.min.x() - 0.2 + (bb.width() + 0.4) * u01(rng),
                    bb.min.y() - 0.2 + (bb.height() + 0.4) * u01(rng));
      if (boundary_distance(p, poly) < 1e-6) continue;  // both rules are moot there
      CHECK(point_in_polygon(p, poly) == winding_inside(p, poly));
      ++compared;
    }
  }
  CHECK(compared > 9000);
}

TEST_CASE("to_polar on the unit square") {
  const PolarPolygond p = to_polar(unit_square(), Vec2d(0.5, 0.5));
  REQUIRE(p.size() == 4);
  const double r = std::sqrt(2.0) / 2.0;
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(p.radii()[i] == doctest::Approx(r).epsilon(1e-15));
    CHECK(p.angles()[i] ==
          doctest::Approx(kPi / 4.0 + kPi / 2.0 * static_cast<double>(i)).epsilon(1e-15));
  }
}

TEST_CASE("to_polar normalizes orientation and starting vertex") {
  const CartesianPolygon sq = unit_square();
  const Vec2d o(0.5, 0.5);
  const PolarPolygond a = to_polar(sq, o);
  const PolarPolygond b = to_polar(sq.reversed(), o);
  std::vector<Vec2d> rotated(sq.vertices().begin() + 3, sq.vertices().end());
  rotated.insert(rotated.end(), sq.vertices().begin(), sq.vertices().begin() + 3);
  const PolarPolygond c = to_polar(CartesianPolygon(rotated), o);
  for (Eigen::Index i = 0; i < 4; ++i) {
    CHECK(a.angles()[i] == b.angles()[i]);
    CHECK(a.radii()[i] == b.radii()[i]);
    CHECK(a.angles()[i] == c.angles()[i]);
    CHECK(a.radii()[i] == c.radii()[i]);
  }
}

TEST_CASE("to_polar rejects non-star configurations") {
  // U-shape: the channel makes vertex angles double back about any interior
  // origin of the base.
  const CartesianPolygon u({{0.0, 0.0},
                            {3.0, 0.0},
                            {3.0, 3.0},
                            {2.0, 3.0},
                            {2.0, 1.0},
                            {1.0, 1.0},
                            {1.0, 3.0},
                            {0.0, 3.0}});
  CHECK_THROWS_WITH_AS(to_polar(u, Vec2d(1.5, 0.5)), doctest::Contains("not cyclically monotone"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(to_polar(unit_square(), Vec2d(2.0, 2.0)),
                       doctest::Contains("outside the polygon"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(to_polar(unit_square(), Vec2d(0.0, 0.0)),
                       doctest::Contains("coincides with vertex"), std::invalid_argument);
}

TEST_CASE("normalize_angle stays in range when rounding lands on 2pi") {
  // fmod(-1e-17, 2pi) + 2pi rounds to exactly 2pi; the fold keeps the
  // [0, 2pi) contract.
  CHECK(normalize_angle(-1e-17) == 0.0);
  CHECK(normalize_angle(kTwoPi) == 0.0);
  CHECK(normalize_angle(5.0) == 5.0);

  // Real-world trigger: a regular pentagon's area centroid carries ~1e-17 of
  // rounding, so the first vertex sits at a tiny negative relative angle.
  const CartesianPolygon pent = make_regular_polygon(5, 0.8, Vec2d(4.0, 0.0));
  const PolarPolygond p = to_polar(pent, geometric_centroid(pent));
  REQUIRE(p.size() == 5);
  for (Eigen::Index i = 0; i < p.size(); ++i) CHECK(p.angles()[i] < kTwoPi);
}

TEST_CASE("polar polygon invariants are enforced") {
  VecX<double> angles(3), radii(3);
  angles << 0.1, 1.0, 2.0;
  radii << 1.0, 1.0, 1.0;
  CHECK_NOTHROW(PolarPolygond(Vec2d::Zero(), angles, radii));
  angles << 0.1, 2.0, 1.0;
  CHECK_THROWS_WITH_AS(PolarPolygond(Vec2d::Zero(), angles, radii),
                       doctest::Contains("strictly increasing"), std::invalid_argument);
  angles << 0.1, 1.0, kTwoPi;
  CHECK_THROWS_WITH_AS(PolarPolygond(Vec2d::Zero(), angles, radii),
                       doctest::Contains("out of [0, 2pi)"), std::invalid_argument);
  angles << 0.1, 1.0, 2.0;
  radii << 1.0, 0.0, 1.0;
  CHECK_THROWS_WITH_AS(PolarPolygond(Vec2d::Zero(), angles, radii),
                       doctest::Contains("nonpositive radius"), std::invalid_argument);
}

TEST_CASE("polar round trip on random star polygons") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const int k = 3 + static_cast<int>(rng() % 20);
    const PolarPolygond polar = random_star_polygon(rng, k, t % 2 == 0);
    const CartesianPolygon cart = to_cartesian(polar);
    const PolarPolygond back = to_polar(cart, polar.origin());
    REQUIRE(back.size() == polar.size());
    for (Eigen::Index i = 0; i < polar.size(); ++i) {
      CHECK(std::fabs(back.angles()[i] - polar.angles()[i]) < 1e-9);
      CHECK(std::fabs(back.radii()[i] - polar.radii()[i]) < 1e-9);
    }
  }
}
