#pragma once

#include "polarpoly/polygon.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace polarpoly {

// Rasterized intersection-over-union of two simple polygons. Both are sampled
// at pixel centers of a grid x grid lattice spanning their joint bounding box
// padded by 2% per axis on each side, with even-odd membership. Throws
// NumericalError when neither polygon covers a pixel.
double polygon_iou(const CartesianPolygon& a, const CartesianPolygon& b, int grid = 512);

// Pairwise IoU, predictions along rows and ground truths along columns.
Eigen::MatrixXd iou_matrix(const std::vector<CartesianPolygon>& preds,
                           const std::vector<CartesianPolygon>& gts, int grid = 512);

// Minimum-cost one-to-one assignment on a rectangular cost matrix. The
// shorter side is matched completely; pairs are sorted by row index.
std::vector<std::pair<int, int>> hungarian_assign(const Eigen::MatrixXd& cost);

struct MatchedPair {
  int pred = -1;
  int gt = -1;
  double iou = 0.0;
};

struct MatchReport {
  std::vector<MatchedPair> assignments;  // only pairs with iou >= iou_threshold
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double iou_threshold = 0.5;
  bool empty_inputs = false;
};

// Hungarian matching on cost 1 - IoU, then pairs below the threshold are
// dropped. precision = TP / #preds, recall = TP / #gts, f1 their harmonic
// mean (0 when both are 0). Empty inputs yield zero metrics and a flag.
MatchReport evaluate(const std::vector<CartesianPolygon>& preds,
                     const std::vector<CartesianPolygon>& gts, double iou_threshold = 0.5,
                     int grid = 512);

}  // namespace polarpoly
