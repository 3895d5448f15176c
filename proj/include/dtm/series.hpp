#pragma once

#include <initializer_list>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace dtm {

/// A truncated Taylor expansion sum_{i=0}^{N} c_i (t - t0)^i.
///
/// The coefficients are the differential transform Y(0..N) of the function
/// about `base_point()`. All binary operations require both operands to share
/// the same order and base point; mixing them throws `MismatchError`.
/// Values are immutable once built.
class Series {
 public:
  Series(double base_point, std::vector<double> coeffs);
  Series(double base_point, std::initializer_list<double> coeffs)
      : Series(base_point, std::vector<double>(coeffs)) {}

  static Series constant(double c, double t0, int order);
  /// The independent variable t = t0 + lambda. Needs order >= 1.
  static Series time_var(double t0, int order);
  static Series zero(double t0, int order) { return constant(0.0, t0, order); }

  double base_point() const noexcept { return base_; }
  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t i) const { return coeffs_[i]; }

  /// Horner evaluation of the polynomial at t.
  double eval(double t) const noexcept;

  friend bool operator==(const Series&, const Series&) = default;

 private:
  double base_;
  std::vector<double> coeffs_;
};

/// Denominators whose constant term is at most this in magnitude are singular.
inline constexpr double kSingularTolerance = 1e-300;

Series operator+(const Series& a, const Series& b);
Series operator-(const Series& a, const Series& b);
Series operator-(const Series& a);
Series operator*(double beta, const Series& a);
Series operator*(const Series& a, const Series& b);
Series operator/(const Series& a, const Series& b);

inline Series scale(double beta, const Series& a) { return beta * a; }

enum class Elementary { exp, ln, sin, cos, tan, asin, atan, sqrt_pos, sqrt_neg };

std::string_view to_string(Elementary kind) noexcept;

Series elementary(Elementary kind, const Series& u);

Series exp(const Series& u);
Series log(const Series& u);
/// sin and cos of u, computed together.
std::pair<Series, Series> sin_cos(const Series& u);
Series sin(const Series& u);
Series cos(const Series& u);
Series tan(const Series& u);
Series asin(const Series& u);
Series atan(const Series& u);
Series sqrt(const Series& u, bool negative_branch = false);

/// u^n by repeated squaring; negative n divides.
Series pow(const Series& u, int n);
/// u^p = exp(p ln u); the constant term of u must be positive.
Series pow(const Series& u, double p);

/// Antiderivative vanishing at the base point: result[i] = v[i-1] / i.
Series integrate(const Series& v);
/// Formal m-th derivative (m >= 0); coefficients shifted past the order are 0.
Series differentiate(const Series& v, int m = 1);
/// Series of v(q t) about 0: result[i] = q^i v[i]. Base point must be 0.
Series rescale_argument(const Series& v, double q);

}  // namespace dtm
