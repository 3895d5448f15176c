#pragma once

#include <cmath>
#include <optional>

#include "dtm/expr.hpp"

namespace dtm::detail {

// Real-valued primitives shared by constant folding and numeric evaluation.
// nullopt means the argument is outside the domain or the result overflowed.

inline std::optional<double> finite(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<double> apply_unary(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::neg: return -x;
    case UnaryOp::exp: return finite(std::exp(x));
    case UnaryOp::ln:
      if (!(x > 0)) return std::nullopt;
      return std::log(x);
    case UnaryOp::sin: return finite(std::sin(x));
    case UnaryOp::cos: return finite(std::cos(x));
    case UnaryOp::tan: return finite(std::tan(x));
    case UnaryOp::sec: {
      const double c = std::cos(x);
      if (c == 0.0) return std::nullopt;
      return finite(1.0 / c);
    }
    case UnaryOp::asin:
      if (!(std::abs(x) <= 1.0)) return std::nullopt;
      return std::asin(x);
    case UnaryOp::atan: return finite(std::atan(x));
    case UnaryOp::sqrt_pos:
      if (!(x >= 0)) return std::nullopt;
      return std::sqrt(x);
    case UnaryOp::sqrt_neg:
      if (!(x >= 0)) return std::nullopt;
      return -std::sqrt(x);
  }
  return std::nullopt;
}

inline std::optional<double> apply_binary(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::add: return finite(a + b);
    case BinaryOp::sub: return finite(a - b);
    case BinaryOp::mul: return finite(a * b);
    case BinaryOp::div:
      if (b == 0.0) return std::nullopt;
      return finite(a / b);
    case BinaryOp::pow:
      if (a < 0 && b != std::floor(b)) return std::nullopt;
      if (a == 0 && b < 0) return std::nullopt;
      return finite(std::pow(a, b));
  }
  return std::nullopt;
}

}  // namespace dtm::detail
