#include "polarpoly/eval.hpp"

#include "polarpoly/common.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polarpoly {

namespace {

// Even-odd membership of one lattice row. A pixel center is inside when an
// odd number of edge crossings lie strictly to its right, matching the
// point-in-polygon crossing test. Pixel centers are visited in ascending x,
// so one pointer into the sorted crossing list suffices.
void rasterize_row(const CartesianPolygon& poly, double y, double x0, double dx, int grid,
                   std::vector<double>& crossings, std::vector<unsigned char>& row) {
  crossings.clear();
  const auto& v = poly.vertices();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2d& a = v[i];
    const Vec2d& b = v[(i + 1) % n];
    if ((a.y() > y) != (b.y() > y))
      crossings.push_back(a.x() + (y - a.y()) * (b.x() - a.x()) / (b.y() - a.y()));
  }
  std::sort(crossings.begin(), crossings.end());
  std::size_t idx = 0;
  for (int j = 0; j < grid; ++j) {
    const double x = x0 + (static_cast<double>(j) + 0.5) * dx;
    while (idx < crossings.size() && crossings[idx] <= x) ++idx;
    row[static_cast<std::size_t>(j)] = static_cast<unsigned char>((crossings.size() - idx) & 1u);
  }
}

}  // namespace

double polygon_iou(const CartesianPolygon& a, const CartesianPolygon& b, int grid) {
  if (grid < 64) throw std::invalid_argument("polygon_iou: grid >= 64 required");

  BoundingBox bb = bounding_box(a);
  const BoundingBox bbb = bounding_box(b);
  bb.min = bb.min.cwiseMin(bbb.min);
  bb.max = bb.max.cwiseMax(bbb.max);
  const double pad_x = 0.02 * bb.width();
  const double pad_y = 0.02 * bb.height();
  const double x0 = bb.min.x() - pad_x;
  const double y0 = bb.min.y() - pad_y;
  const double dx = (bb.width() + 2.0 * pad_x) / static_cast<double>(grid);
  const double dy = (bb.height() + 2.0 * pad_y) / static_cast<double>(grid);

  std::vector<double> crossings;
  std::vector<unsigned char> row_a(static_cast<std::size_t>(grid));
  std::vector<unsigned char> row_b(static_cast<std::size_t>(grid));
  long long inter = 0;
  long long uni = 0;
  for (int i = 0; i < grid; ++i) {
    const double y = y0 + (static_cast<double>(i) + 0.5) * dy;
    rasterize_row(a, y, x0, dx, grid, crossings, row_a);
    rasterize_row(b, y, x0, dx, grid, crossings, row_b);
    for (int j = 0; j < grid; ++j) {
      const std::size_t s = static_cast<std::size_t>(j);
      inter += row_a[s] & row_b[s];
      uni += row_a[s] | row_b[s];
    }
  }
  if (uni == 0) throw NumericalError("polygon_iou: both polygons empty on the lattice");
  return static_cast<double>(inter) / static_cast<double>(uni);
}

Eigen::MatrixXd iou_matrix(const std::vector<CartesianPolygon>& preds,
                           const std::vector<CartesianPolygon>& gts, int grid) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(preds.size()),
                      static_cast<Eigen::Index>(gts.size()));
  for (std::size_t i = 0; i < preds.size(); ++i)
    for (std::size_t j = 0; j < gts.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          polygon_iou(preds[i], gts[j], grid);
  return out;
}

std::vector<std::pair<int, int>> hungarian_assign(const Eigen::MatrixXd& cost) {
  const int nr = static_cast<int>(cost.rows());
  const int nc = static_cast<int>(cost.cols());
  if (nr == 0 || nc == 0) return {};
  if (!cost.allFinite()) throw std::invalid_argument("hungarian_assign: finite entries required");

  // Potentials-based shortest augmenting path assignment on the matrix
  // padded to square with zero-cost entries. Dummy rows and columns carry a
  // constant cost, so the optimum restricted to real pairs stays optimal.
  const int n = std::max(nr, nc);
  const auto entry = [&](int i, int j) { return i < nr && j < nc ? cost(i, j) : 0.0; };
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        const std::size_t js = static_cast<std::size_t>(j);
        if (used[js]) continue;
        const double cur = entry(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[js];
        if (cur < minv[js]) {
          minv[js] = cur;
          way[js] = j0;
        }
        if (minv[js] < delta) {
          delta = minv[js];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        const std::size_t js = static_cast<std::size_t>(j);
        if (used[js]) {
          u[static_cast<std::size_t>(p[js])] += delta;
          v[js] -= delta;
        } else {
          minv[js] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<std::pair<int, int>> out;
  for (int j = 1; j <= n; ++j) {
    const int i = p[static_cast<std::size_t>(j)];
    if (i >= 1 && i <= nr && j <= nc) out.emplace_back(i - 1, j - 1);
  }
  std::sort(out.begin(), out.end());
  return out;
}

MatchReport evaluate(const std::vector<CartesianPolygon>& preds,
                     const std::vector<CartesianPolygon>& gts, double iou_threshold, int grid) {
  if (!(iou_threshold > 0.0) || !(iou_threshold < 1.0))
    throw std::invalid_argument("evaluate: iou threshold in (0, 1) required");
  MatchReport report;
  report.iou_threshold = iou_threshold;
  if (preds.empty() || gts.empty()) {
    report.empty_inputs = true;
    return report;
  }
  const Eigen::MatrixXd ious = iou_matrix(preds, gts, grid);
  const Eigen::MatrixXd cost = Eigen::MatrixXd::Ones(ious.rows(), ious.cols()) - ious;
  for (const auto& [i, j] : hungarian_assign(cost)) {
    const double iou = ious(i, j);
    if (iou >= iou_threshold) report.assignments.push_back({i, j, iou});
  }
  const double tp = static_cast<double>(report.assignments.size());
  report.precision = tp / static_cast<double>(preds.size());
  report.recall = tp / static_cast<double>(gts.size());
  report.f1 = report.precision + report.recall > 0.0
                  ? 2.0 * report.precision * report.recall / (report.precision + report.recall)
                  : 0.0;
  return report;
}

}  // namespace polarpoly
