#include "polarpoly/codec.hpp"

namespace polarpoly {

std::pair<Vec2d, RadialProfiled> encode_ground_truth(const CartesianPolygon& gt, int m) {
  const Vec2d origin = geometric_centroid(gt);
  if (!point_in_polygon(origin, gt))
    throw std::invalid_argument(
        "encode_ground_truth: centroid lies outside the polygon (origin must be interior)");
  return {origin, resample_vector(gt, origin, m, kPi / static_cast<double>(m))};
}

}  // namespace polarpoly
