// Shared aliases, constants and small numeric helpers.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace polarpoly {

template <typename S>
using Vec2 = Eigen::Matrix<S, 2, 1>;
template <typename S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using Vec2d = Eigen::Vector2d;
using Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Tolerance for degeneracy decisions: duplicate vertices, parallel rays,
// ray/vertex coincidence, boundary inclusion.
inline constexpr double kDegenerateTol = 1e-12;

// Thrown when a computation produced non-finite values or failed to make
// numerical sense (the CLI maps this to exit code 2; validation errors use
// std::invalid_argument and map to exit code 1).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Plain-double view of a scalar; the autodiff type overloads this so that
// branch decisions and invariant checks never touch the tape.
constexpr double value_of(double x) { return x; }

// Maps any angle to [0, 2pi). atan2 output lands in (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // Adding 2pi to a tiny negative remainder rounds up to exactly 2pi; fold
  // that back to the canonical representative so the contract holds.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

}  // namespace polarpoly
