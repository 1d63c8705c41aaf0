#pragma once

#include "polarpoly/codec.hpp"
#include "polarpoly/gradient.hpp"
#include "polarpoly/loss.hpp"
#include "polarpoly/polygon.hpp"

#include <cstdint>
#include <vector>

namespace polarpoly {

// Angle parameterization used during fitting. kFixed freezes the angle block
// at zero so the rays stay uniform and only origin and radii are optimized.
enum class FitAngleMode { kCumsum, kBinOffset, kFixed };

// How the ground-truth origin is derived from the target polygon.
enum class OriginMode { kCentroid, kBboxCenter, kVertexMean };

enum class Optimizer { kAdam, kSgd };

struct FitConfig {
  int k = 12;
  int m = 180;
  int max_iters = 500;
  Optimizer optimizer = Optimizer::kAdam;
  double learning_rate = 0.05;
  LossWeights weights;
  FitAngleMode angle_mode = FitAngleMode::kCumsum;
  OriginMode origin_mode = OriginMode::kCentroid;
  // Initialization is deterministic (zero logits), so fitting does not draw
  // random numbers; the seed is kept so runs can be labelled consistently.
  std::uint64_t seed = 0;
  // Stop early once the total loss improves by less than this over a window
  // of 20 iterations. Zero disables the check.
  double convergence_tol = 0.0;
  // Iterations at which the pre-update polygon is captured.
  std::vector<int> snapshot_iters;
};

struct FitIterationRecord {
  int iter = 0;  // 1-based; record 1 holds the losses of the initial state
  LossBreakdown losses;
};

struct FitSnapshot {
  int iter = 0;
  PolarPolygond polygon;
};

struct FitTrace {
  std::vector<FitIterationRecord> records;
  std::vector<FitSnapshot> snapshots;
  int k = 0;
  int m = 0;
  int param_count = 0;
  FitAngleMode angle_mode = FitAngleMode::kCumsum;
  OriginMode origin_mode = OriginMode::kCentroid;
};

struct FitResult {
  PolarPolygond polygon;
  FitTrace trace;
  // Losses of polygon itself, i.e. after the last parameter update.
  LossBreakdown final_losses;
};

// First and second moment estimates for Adam.
struct AdamState {
  VectorXd m;
  VectorXd v;
  int step = 0;
};

// One bias-corrected Adam update in place. State vectors are allocated on
// first use and must keep the size of params afterwards.
void adam_step(VectorXd& params, const VectorXd& grad, AdamState& state, double learning_rate);

// Builds the fitting target: an origin chosen per mode, a dense profile of m
// rays cast from it at half-bin phase, and the bounding box extents used to
// normalize the origin loss.
GroundTruth make_ground_truth(const CartesianPolygon& target, int m, OriginMode mode);

// Gradient-descent fit of a polar polygon to the target. Throws
// std::invalid_argument on bad configuration and NumericalError when the
// optimization diverges.
FitResult fit(const CartesianPolygon& target, const FitConfig& cfg);

}  // namespace polarpoly
