// Tape-based reverse-mode autodiff on scalars.
//
// A Tape records one expression graph per fitting run; Var is a lightweight
// handle (tape pointer + node index + cached value). Vars without a tape are
// constants and record nothing. Forward values are computed with exactly the
// same double arithmetic as the plain-double code path, so a templated
// function instantiated with Var produces bit-identical values.
#pragma once

#include "polarpoly/common.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace polarpoly::ad {

enum class Op : std::uint8_t {
  kInput,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kNeg,
  kExp,
  kLog,
  kSin,
  kCos,
  kSqrt,
  kAbs,
  kMax,  // select nodes: partial 1 on the chosen parent, 0 on the other
  kMin,
};

class Tape;

class Var {
 public:
  Var() = default;
  Var(double v) : value_(v) {}  // NOLINT: implicit by design, mirrors double

  double value() const { return value_; }
  bool is_constant() const { return tape_ == nullptr; }
  Tape* tape() const { return tape_; }
  std::int32_t index() const { return index_; }

 private:
  friend class Tape;
  Var(Tape* t, std::int32_t i, double v) : tape_(t), index_(i), value_(v) {}

  Tape* tape_ = nullptr;
  std::int32_t index_ = -1;
  double value_ = 0.0;
};

inline double value_of(const Var& v) { return v.value(); }

class Tape {
 public:
  Tape() { nodes_.reserve(1 << 14); }

  Var input(double v) {
    return Var(this, push(Op::kInput, -1, -1, 0.0, 0.0, v), v);
  }

  std::vector<Var> inputs(const VectorXd& xs) {
    std::vector<Var> out;
    out.reserve(static_cast<std::size_t>(xs.size()));
    for (Eigen::Index i = 0; i < xs.size(); ++i) out.push_back(input(xs[i]));
    return out;
  }

  std::size_t size() const { return nodes_.size(); }
  double value(std::int32_t i) const { return values_[static_cast<std::size_t>(i)]; }

  // Reverse sweep from `output`; returns the adjoints of the first n_inputs
  // nodes (the order in which input() was called).
  VectorXd gradient(const Var& output, int n_inputs) const {
    if (output.tape() != this)
      throw std::invalid_argument("gradient: output does not belong to this tape");
    std::vector<double> adj(nodes_.size(), 0.0);
    adj[static_cast<std::size_t>(output.index())] = 1.0;
    for (std::int32_t i = output.index(); i >= 0; --i) {
      const double a = adj[static_cast<std::size_t>(i)];
      if (a == 0.0) continue;
      const Node& n = nodes_[static_cast<std::size_t>(i)];
      if (n.a >= 0) adj[static_cast<std::size_t>(n.a)] += n.da * a;
      if (n.b >= 0) adj[static_cast<std::size_t>(n.b)] += n.db * a;
    }
    VectorXd g(n_inputs);
    for (int i = 0; i < n_inputs; ++i) g[i] = adj[static_cast<std::size_t>(i)];
    return g;
  }

  Var unary(Op op, const Var& x, double value, double dx) {
    return Var(this, push(op, x.index(), -1, dx, 0.0, value), value);
  }

  Var binary(Op op, const Var& x, const Var& y, double value, double dx, double dy) {
    return Var(this, push(op, x.is_constant() ? -1 : x.index(),
                          y.is_constant() ? -1 : y.index(), dx, dy, value),
               value);
  }

 private:
  struct Node {
    Op op;
    std::int32_t a, b;   // parent indices, -1 = none
    double da, db;       // local partials w.r.t. the parents
  };

  std::int32_t push(Op op, std::int32_t a, std::int32_t b, double da, double db,
                    double value) {
    nodes_.push_back(Node{op, a, b, da, db});
    values_.push_back(value);
    return static_cast<std::int32_t>(nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
  std::vector<double> values_;
};

namespace detail {
inline Tape* tape_of(const Var& a, const Var& b) {
  Tape* t = a.tape() ? a.tape() : b.tape();
  return t;
}
}  // namespace detail

// Arithmetic. Each forward value is the same single double operation the
// plain-double instantiation would perform.

inline Var operator+(const Var& a, const Var& b) {
  const double v = a.value() + b.value();
  Tape* t = detail::tape_of(a, b);
  if (!t) return Var(v);
  return t->binary(Op::kAdd, a, b, v, 1.0, 1.0);
}

inline Var operator-(const Var& a, const Var& b) {
  const double v = a.value() - b.value();
  Tape* t = detail::tape_of(a, b);
  if (!t) return Var(v);
  return t->binary(Op::kSub, a, b, v, 1.0, -1.0);
}

inline Var operator*(const Var& a, const Var& b) {
  const double v = a.value() * b.value();
  Tape* t = detail::tape_of(a, b);
  if (!t) return Var(v);
  return t->binary(Op::kMul, a, b, v, b.value(), a.value());
}

inline Var operator/(const Var& a, const Var& b) {
  const double v = a.value() / b.value();
  Tape* t = detail::tape_of(a, b);
  if (!t) return Var(v);
  return t->binary(Op::kDiv, a, b, v, 1.0 / b.value(),
                   -a.value() / (b.value() * b.value()));
}

inline Var operator-(const Var& a) {
  const double v = -a.value();
  if (a.is_constant()) return Var(v);
  return a.tape()->unary(Op::kNeg, a, v, -1.0);
}

inline Var operator+(const Var& a) { return a; }

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }
inline Var& operator/=(Var& a, const Var& b) { return a = a / b; }

// Comparisons look only at values; branch structure is piecewise-constant
// w.r.t. the inputs and is never differentiated.
inline bool operator<(const Var& a, const Var& b) { return a.value() < b.value(); }
inline bool operator>(const Var& a, const Var& b) { return a.value() > b.value(); }
inline bool operator<=(const Var& a, const Var& b) { return a.value() <= b.value(); }
inline bool operator>=(const Var& a, const Var& b) { return a.value() >= b.value(); }
inline bool operator==(const Var& a, const Var& b) { return a.value() == b.value(); }
inline bool operator!=(const Var& a, const Var& b) { return a.value() != b.value(); }

inline Var exp(const Var& a) {
  const double v = std::exp(a.value());
  if (a.is_constant()) return Var(v);
  return a.tape()->unary(Op::kExp, a, v, v);
}

inline Var log(const Var& a) {
  const double v = std::log(a.value());
  if (a.is_constant()) return Var(v);
  return a.tape()->unary(Op::kLog, a, v, 1.0 / a.value());
}

inline Var sin(const Var& a) {
  const double v = std::sin(a.value());
  if (a.is_constant()) return Var(v);
  return a.tape()->unary(Op::kSin, a, v, std::cos(a.value()));
}

inline Var cos(const Var& a) {
  const double v = std::cos(a.value());
  if (a.is_constant()) return Var(v);
  return a.tape()->unary(Op::kCos, a, v, -std::sin(a.value()));
}

inline Var sqrt(const Var& a) {
  const double v = std::sqrt(a.value());
  if (a.is_constant()) return Var(v);
  return a.tape()->unary(Op::kSqrt, a, v, 0.5 / v);
}

// Subgradient at 0 is 0.
inline Var abs(const Var& a) {
  const double v = std::fabs(a.value());
  if (a.is_constant()) return Var(v);
  const double s = a.value() > 0.0 ? 1.0 : (a.value() < 0.0 ? -1.0 : 0.0);
  return a.tape()->unary(Op::kAbs, a, v, s);
}

inline Var fabs(const Var& a) { return abs(a); }

// Ties route the gradient to the first argument, matching std::max/std::min
// on doubles.
inline Var max(const Var& a, const Var& b) {
  const bool first = a.value() >= b.value();
  const double v = first ? a.value() : b.value();
  Tape* t = detail::tape_of(a, b);
  if (!t) return Var(v);
  return t->binary(Op::kMax, a, b, v, first ? 1.0 : 0.0, first ? 0.0 : 1.0);
}

inline Var min(const Var& a, const Var& b) {
  const bool first = a.value() <= b.value();
  const double v = first ? a.value() : b.value();
  Tape* t = detail::tape_of(a, b);
  if (!t) return Var(v);
  return t->binary(Op::kMin, a, b, v, first ? 1.0 : 0.0, first ? 0.0 : 1.0);
}

inline bool isfinite(const Var& a) { return std::isfinite(a.value()); }

}  // namespace polarpoly::ad

namespace Eigen {

// Enough of NumTraits for Matrix<Var, ...> storage; the differentiable
// pipeline deliberately avoids Eigen reductions (their evaluation order can
// differ between scalar types, which would break bit-identical forwards).
template <>
struct NumTraits<polarpoly::ad::Var> : NumTraits<double> {
  using Real = polarpoly::ad::Var;
  using NonInteger = polarpoly::ad::Var;
  using Literal = double;
  using Nested = polarpoly::ad::Var;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 3,
    MulCost = 3,
  };
};

}  // namespace Eigen
