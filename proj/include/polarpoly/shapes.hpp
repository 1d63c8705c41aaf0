// Built-in demo targets and seeded random shape generators for tests and the
// gradcheck harness.
#pragma once

#include "polarpoly/polygon.hpp"

#include <random>

namespace polarpoly {

// Concave star with `points` tips, vertices alternating outer/inner radius.
CartesianPolygon make_star(int points = 5, double outer = 1.0, double inner = 0.5,
                           const Vec2d& center = Vec2d(1.5, 1.5), double rot = kPi / 2.0);

// Axis-aligned L: a wx-by-wy rectangle with the upper-right corner cut away,
// leaving arms of thickness tx and ty. The defaults put the bbox center in
// the notch (outside the polygon) while the area centroid stays inside.
CartesianPolygon make_lshape(double wx = 3.0, double wy = 3.0, double tx = 1.35,
                             double ty = 1.35, const Vec2d& corner = Vec2d(0.0, 0.0));

// Elongated crosswalk-like band with a sawtooth boundary, star-shaped about
// its center by construction (radial sawtooth on an oval).
CartesianPolygon make_zigzag_band();

CartesianPolygon make_regular_polygon(int k, double radius, const Vec2d& center = Vec2d::Zero(),
                                      double rot = 0.0);

// Random polygon star-shaped about its returned origin; `concave` draws
// radii in [0.4, 2], otherwise the vertices sit on a random ellipse (and the
// polygon is convex). Adjacent vertex angles are kept >= ~0.3/k apart.
PolarPolygond random_star_polygon(std::mt19937_64& rng, int k, bool concave = true);

CartesianPolygon random_convex_polygon(std::mt19937_64& rng, int k);

// Random axis-aligned L-shape whose centroid lies strictly inside the
// corner kernel (every boundary point visible from it); arm-thickness
// fractions are drawn in [0.40, 0.55] so some instances also have their bbox
// center outside the polygon.
CartesianPolygon random_lshape(std::mt19937_64& rng);

}  // namespace polarpoly
