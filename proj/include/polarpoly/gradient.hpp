// Gradient of the regression loss w.r.t. the flat logit vector, plus the
// finite-difference machinery used to check it.
#pragma once

#include "polarpoly/autodiff.hpp"
#include "polarpoly/codec.hpp"
#include "polarpoly/loss.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace polarpoly {

// Rays closer than this (radians) to a decoded vertex sit on a bracket
// boundary; the one-sided subgradient is used there and the input flagged.
inline constexpr double kBranchGuardTol = 1e-6;

struct LossGradient {
  LossBreakdown breakdown;
  VectorXd gradient;               // d total / d f, length 2 + 2k
  bool near_branch_boundary = false;
};

// Differentiates decode -> resample_triangle -> regression_loss through the
// tape. The forward value is bit-identical to the plain double pipeline.
LossGradient grad_regression_loss(const VectorXd& f, const GridCell& cell,
                                  const DecoderConfig& cfg, const GroundTruth& gt,
                                  const LossWeights& w);

// Central differences, (fn(x + eps e_i) - fn(x - eps e_i)) / (2 eps).
VectorXd finite_difference(const std::function<double(const VectorXd&)>& fn, const VectorXd& x,
                           double eps);

// Discrete decisions the loss makes at one point: which vertex pair brackets
// each ray, which side each max/min picks, smooth-L1 branches, and the signs
// feeding the smoothness |.|. Finite differences are only a valid oracle
// where this stays constant across the stencil.
struct BranchSignature {
  std::vector<std::int32_t> bracket;      // per ray; coincident rays negated
  std::vector<std::uint8_t> iou_pick;     // per ray: pred >= gt
  std::uint8_t l1_branch = 0;             // bit 0: x quadratic, bit 1: y quadratic
  std::vector<std::int8_t> diff_sign;     // first then second difference signs
  std::vector<std::int8_t> clamp_state;   // per logit: -1/0/+1 against its clamp

  bool operator==(const BranchSignature&) const = default;
};

BranchSignature branch_signature(const VectorXd& f, const GridCell& cell,
                                 const DecoderConfig& cfg, const GroundTruth& gt);

struct GradCheckConfig {
  int k = 12;
  int m = 90;
  int trials = 100;
  double eps = 1e-5;
  double rel_tol = 1e-4;
  double abs_tol = 1e-7;   // used when both sides are near zero
  std::uint64_t seed = 0;
};

struct GradCheckReport {
  int trials = 0;
  long components_checked = 0;
  long components_skipped = 0;  // FD stencil crossed a branch boundary
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  bool passed = true;
};

// Random star-shaped targets and random logit vectors; every unskipped
// component of the analytic gradient is compared against central
// differences. Inputs flagged near a branch boundary are redrawn.
GradCheckReport run_gradcheck(const GradCheckConfig& cfg);

}  // namespace polarpoly
