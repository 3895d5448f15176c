#include "dtm/series.hpp"

#include <cmath>
#include <string>

#include "dtm/error.hpp"

namespace dtm {

namespace {

void require_compatible(const Series& a, const Series& b, const char* op) {
  if (a.base_point() != b.base_point()) {
    throw MismatchError(std::string(op) + ": base points differ (" +
                        std::to_string(a.base_point()) + " vs " +
                        std::to_string(b.base_point()) + ")");
  }
  if (a.order() != b.order()) {
    throw MismatchError(std::string(op) + ": orders differ (" +
                        std::to_string(a.order()) + " vs " +
                        std::to_string(b.order()) + ")");
  }
}

std::vector<double> zeros(const Series& like) {
  return std::vector<double>(like.coeffs().size(), 0.0);
}

}  // namespace

Series::Series(double base_point, std::vector<double> coeffs)
    : base_(base_point), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw ValidationError("a series needs at least one coefficient");
  }
}

Series Series::constant(double c, double t0, int order) {
  if (order < 0) throw ValidationError("series order must be non-negative");
  std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
  v[0] = c;
  return Series(t0, std::move(v));
}

Series Series::time_var(double t0, int order) {
  if (order < 1) {
    throw ValidationError("the time variable needs a series of order >= 1");
  }
  std::vector<double> v(static_cast<std::size_t>(order) + 1, 0.0);
  v[0] = t0;
  v[1] = 1.0;
  return Series(t0, std::move(v));
}

double Series::eval(double t) const noexcept {
  const double x = t - base_;
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Series operator+(const Series& a, const Series& b) {
  require_compatible(a, b, "add");
  auto r = zeros(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] + b[i];
  return Series(a.base_point(), std::move(r));
}

Series operator-(const Series& a, const Series& b) {
  require_compatible(a, b, "sub");
  auto r = zeros(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] - b[i];
  return Series(a.base_point(), std::move(r));
}

Series operator-(const Series& a) { return -1.0 * a; }

Series operator*(double beta, const Series& a) {
  auto r = zeros(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = beta * a[i];
  return Series(a.base_point(), std::move(r));
}

Series operator*(const Series& a, const Series& b) {
  require_compatible(a, b, "mul");
  auto r = zeros(a);
  for (std::size_t i = 0; i < r.size(); ++i) {
    double s = 0.0;
    for (std::size_t l = 0; l <= i; ++l) s += a[l] * b[i - l];
    r[i] = s;
  }
  return Series(a.base_point(), std::move(r));
}

Series operator/(const Series& a, const Series& b) {
  require_compatible(a, b, "div");
  const double b0 = b[0];
  if (std::abs(b0) <= kSingularTolerance) {
    throw DivisionBySingularSeries("division by a series with vanishing constant term");
  }
  auto q = zeros(a);
  for (std::size_t k = 0; k < q.size(); ++k) {
    double s = a[k];
    for (std::size_t j = 0; j < k; ++j) s -= q[j] * b[k - j];
    q[k] = s / b0;
  }
  return Series(a.base_point(), std::move(q));
}

std::string_view to_string(Elementary kind) noexcept {
  switch (kind) {
    case Elementary::exp: return "exp";
    case Elementary::ln: return "ln";
    case Elementary::sin: return "sin";
    case Elementary::cos: return "cos";
    case Elementary::tan: return "tan";
    case Elementary::asin: return "asin";
    case Elementary::atan: return "atan";
    case Elementary::sqrt_pos: return "sqrt";
    case Elementary::sqrt_neg: return "nsqrt";
  }
  return "?";
}

Series elementary(Elementary kind, const Series& u) {
  switch (kind) {
    case Elementary::exp: return exp(u);
    case Elementary::ln: return log(u);
    case Elementary::sin: return sin(u);
    case Elementary::cos: return cos(u);
    case Elementary::tan: return tan(u);
    case Elementary::asin: return asin(u);
    case Elementary::atan: return atan(u);
    case Elementary::sqrt_pos: return sqrt(u, false);
    case Elementary::sqrt_neg: return sqrt(u, true);
  }
  throw DomainError("unknown elementary function");
}

// e' = u' e  =>  k e_k = sum_{j=1}^{k} j u_j e_{k-j}
Series exp(const Series& u) {
  auto e = zeros(u);
  e[0] = std::exp(u[0]);
  for (std::size_t k = 1; k < e.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * u[j] * e[k - j];
    e[k] = s / static_cast<double>(k);
  }
  return Series(u.base_point(), std::move(e));
}

// u l' = u'  =>  u_0 l_k = u_k - (1/k) sum_{j=1}^{k-1} j l_j u_{k-j}
Series log(const Series& u) {
  if (!(u[0] > 0.0)) {
    throw DomainError("ln requires a positive constant term, got " + std::to_string(u[0]));
  }
  auto l = zeros(u);
  l[0] = std::log(u[0]);
  for (std::size_t k = 1; k < l.size(); ++k) {
    double s = 0.0;
    for (std::size_t j = 1; j < k; ++j) s += static_cast<double>(j) * l[j] * u[k - j];
    l[k] = (u[k] - s / static_cast<double>(k)) / u[0];
  }
  return Series(u.base_point(), std::move(l));
}

std::pair<Series, Series> sin_cos(const Series& u) {
  auto s = zeros(u);
  auto c = zeros(u);
  s[0] = std::sin(u[0]);
  c[0] = std::cos(u[0]);
  for (std::size_t k = 1; k < s.size(); ++k) {
    double ss = 0.0;
    double cc = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const double ju = static_cast<double>(j) * u[j];
      ss += ju * c[k - j];
      cc += ju * s[k - j];
    }
    s[k] = ss / static_cast<double>(k);
    c[k] = -cc / static_cast<double>(k);
  }
  return {Series(u.base_point(), std::move(s)), Series(u.base_point(), std::move(c))};
}

Series sin(const Series& u) { return sin_cos(u).first; }
Series cos(const Series& u) { return sin_cos(u).second; }

Series tan(const Series& u) {
  auto [s, c] = sin_cos(u);
  if (std::abs(c[0]) <= kSingularTolerance) {
    throw DomainError("tan is singular: cos of the constant term vanishes");
  }
  return s / c;
}

// asin(u) = asin(u0) + integral of u' / sqrt(1 - u^2)
Series asin(const Series& u) {
  if (!(std::abs(u[0]) < 1.0)) {
    throw DomainError("asin requires |constant term| < 1, got " + std::to_string(u[0]));
  }
  const auto one = Series::constant(1.0, u.base_point(), u.order());
  auto r = integrate(differentiate(u) / sqrt(one - u * u));
  std::vector<double> c(r.coeffs().begin(), r.coeffs().end());
  c[0] = std::asin(u[0]);
  return Series(u.base_point(), std::move(c));
}

// atan(u) = atan(u0) + integral of u' / (1 + u^2)
Series atan(const Series& u) {
  const auto one = Series::constant(1.0, u.base_point(), u.order());
  auto r = integrate(differentiate(u) / (one + u * u));
  std::vector<double> c(r.coeffs().begin(), r.coeffs().end());
  c[0] = std::atan(u[0]);
  return Series(u.base_point(), std::move(c));
}

// s^2 = u  =>  2 s_0 s_k = u_k - sum_{j=1}^{k-1} s_j s_{k-j}
Series sqrt(const Series& u, bool negative_branch) {
  if (!(u[0] > 0.0)) {
    throw DomainError("sqrt requires a positive constant term, got " + std::to_string(u[0]));
  }
  auto s = zeros(u);
  s[0] = negative_branch ? -std::sqrt(u[0]) : std::sqrt(u[0]);
  for (std::size_t k = 1; k < s.size(); ++k) {
    double acc = u[k];
    for (std::size_t j = 1; j < k; ++j) acc -= s[j] * s[k - j];
    s[k] = acc / (2.0 * s[0]);
  }
  return Series(u.base_point(), std::move(s));
}

Series pow(const Series& u, int n) {
  const auto one = Series::constant(1.0, u.base_point(), u.order());
  if (n < 0) return one / pow(u, -n);
  Series result = one;
  Series base = u;
  for (unsigned e = static_cast<unsigned>(n); e != 0; e >>= 1) {
    if (e & 1u) result = result * base;
    if (e > 1) base = base * base;
  }
  return result;
}

Series pow(const Series& u, double p) {
  if (p == std::floor(p) && std::abs(p) <= 1024.0) return pow(u, static_cast<int>(p));
  if (!(u[0] > 0.0)) {
    throw DomainError("non-integer power requires a positive constant term, got " +
                      std::to_string(u[0]));
  }
  return exp(p * log(u));
}

Series integrate(const Series& v) {
  auto r = zeros(v);
  for (std::size_t i = 1; i < r.size(); ++i) r[i] = v[i - 1] / static_cast<double>(i);
  return Series(v.base_point(), std::move(r));
}

Series differentiate(const Series& v, int m) {
  if (m < 0) throw ValidationError("derivative order must be non-negative");
  auto r = zeros(v);
  const std::size_t shift = static_cast<std::size_t>(m);
  for (std::size_t i = 0; i + shift < r.size(); ++i) {
    // (i+m)! / i!
    double falling = 1.0;
    for (std::size_t j = 1; j <= shift; ++j) falling *= static_cast<double>(i + j);
    r[i] = falling * v[i + shift];
  }
  return Series(v.base_point(), std::move(r));
}

Series rescale_argument(const Series& v, double q) {
  if (v.base_point() != 0.0) {
    throw NonzeroBasePointScaling("argument scaling needs an expansion about 0, got base point " +
                                  std::to_string(v.base_point()));
  }
  auto r = zeros(v);
  double qi = 1.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = qi * v[i];
    qi *= q;
  }
  return Series(v.base_point(), std::move(r));
}

}  // namespace dtm
