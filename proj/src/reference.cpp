#include "dtm/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dtm/error.hpp"
#include "dtm/evaluate.hpp"

namespace dtm {

namespace {

// Dormand & Prince (1980), RK5(4)7M.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between the 5th and embedded 4th order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension (Hairer, Norsett & Wanner, dopri5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using Vec = std::vector<double>;

double rms_norm(const Vec& v, const Vec& scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v[i] / scale[i];
    s += x * x;
  }
  return std::sqrt(s / static_cast<double>(v.size()));
}

class DormandPrince {
 public:
  DormandPrince(const OdeRhs& f, std::size_t n)
      : f_(f), k1_(n), k2_(n), k3_(n), k4_(n), k5_(n), k6_(n), k7_(n), tmp_(n) {}

  void eval(double t, const Vec& y, Vec& out) { f_(t, y, out); }

  // Fills k2..k7 and y_new from k1 (= f(t, y)); returns the error vector.
  void attempt(double t, const Vec& y, double h, Vec& y_new, Vec& err) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1_[i];
    eval(t + c2 * h, tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    eval(t + c3 * h, tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    }
    eval(t + c4 * h, tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    }
    eval(t + c5 * h, tmp_, k5_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] +
                            a65 * k5_[i]);
    }
    eval(t + h, tmp_, k6_);
    for (std::size_t i = 0; i < n; ++i) {
      y_new[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] +
                             a76 * k6_[i]);
    }
    eval(t + h, y_new, k7_);
    for (std::size_t i = 0; i < n; ++i) {
      err[i] = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                    e7 * k7_[i]);
    }
  }

  RefSegment segment(double t, double h, const Vec& y, const Vec& y_new) const {
    const std::size_t n = y.size();
    RefSegment seg{t, h, y_new, {}};
    for (auto& c : seg.dense) c.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double ydiff = y_new[i] - y[i];
      const double bspl = h * k1_[i] - ydiff;
      seg.dense[0][i] = y[i];
      seg.dense[1][i] = ydiff;
      seg.dense[2][i] = bspl;
      seg.dense[3][i] = ydiff - h * k7_[i] - bspl;
      seg.dense[4][i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] +
                             d6 * k6_[i] + d7 * k7_[i]);
    }
    return seg;
  }

  Vec& k1() { return k1_; }
  void advance() { std::swap(k1_, k7_); }

 private:
  const OdeRhs& f_;
  Vec k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_;
};

double initial_step(DormandPrince& dp, double t0, const Vec& y0, double span,
                    const RefConfig& cfg) {
  const std::size_t n = y0.size();
  Vec scale(n);
  for (std::size_t i = 0; i < n; ++i) scale[i] = cfg.atol + cfg.rtol * std::abs(y0[i]);
  const double d0 = rms_norm(y0, scale);
  const double d1n = rms_norm(dp.k1(), scale);
  double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h0 = std::min(h0, span);
  Vec y1(n), f1(n);
  for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h0 * dp.k1()[i];
  dp.eval(t0 + h0, y1, f1);
  Vec diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = f1[i] - dp.k1()[i];
  const double d2 = rms_norm(diff, scale) / h0;
  const double dmax = std::max(d1n, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
  return std::min({100.0 * h0, h1, span});
}

Vec interpolate(const RefSegment& seg, double t) {
  const double theta = (t - seg.t) / seg.h;
  const double theta1 = 1.0 - theta;
  Vec y(seg.y_end.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = seg.dense[0][i] +
           theta * (seg.dense[1][i] +
                    theta1 * (seg.dense[2][i] +
                              theta * (seg.dense[3][i] + theta1 * seg.dense[4][i])));
  }
  return y;
}

}  // namespace

RefSolution rk45_solve(const OdeRhs& rhs, std::vector<double> y0, double t0, double t_end,
                       std::vector<double> points, const RefConfig& cfg) {
  if (!(cfg.atol > 0) || !(cfg.rtol > 0)) throw ValidationError("tolerances must be positive");
  if (t_end < t0) throw ValidationError("integration must run forward (t_end >= t0)");
  if (y0.empty()) throw ValidationError("empty initial state");
  for (double p : points) {
    if (p < t0 || p > t_end) throw OutOfSpan("requested point outside the integration span");
  }
  std::sort(points.begin(), points.end());

  const std::size_t n = y0.size();
  RefSolution sol;
  sol.t0 = t0;
  sol.t_end = t_end;
  sol.y0 = y0;
  sol.points = points;

  DormandPrince dp(rhs, n);
  Vec y = y0, y_new(n), err(n), scale(n);
  double t = t0;
  dp.eval(t, y, dp.k1());

  const double span = t_end - t0;
  double h = cfg.fixed_step ? *cfg.fixed_step
             : cfg.initial_step > 0 ? cfg.initial_step
                                    : (span > 0 ? initial_step(dp, t0, y0, span, cfg) : 0.0);
  if (cfg.fixed_step && !(*cfg.fixed_step > 0)) throw ValidationError("fixed step must be positive");
  std::size_t next_point = 0;
  bool last_rejected = false;

  while (t < t_end) {
    if (sol.accepted_steps + sol.rejected_steps >= cfg.max_steps) {
      throw MaxStepsExceeded("more than " + std::to_string(cfg.max_steps) + " steps");
    }
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw StepUnderflow("step size underflow at t = " + std::to_string(t));
    }
    double target = t_end;
    if (cfg.stop_at_points) {
      while (next_point < points.size() && points[next_point] <= t) ++next_point;
      if (next_point < points.size()) target = points[next_point];
    }
    bool clipped = false;
    double h_try = h;
    if (t + h_try >= target || (target - (t + h_try)) < 1e-12 * std::max(1.0, std::abs(target))) {
      h_try = target - t;
      clipped = true;
    }

    dp.attempt(t, y, h_try, y_new, err);

    if (cfg.fixed_step) {
      sol.segments.push_back(dp.segment(t, h_try, y, y_new));
      t = clipped ? target : t + h_try;
      y = y_new;
      dp.advance();
      ++sol.accepted_steps;
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) {
      scale[i] = cfg.atol + cfg.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    }
    const double e = rms_norm(err, scale);
    double factor = e == 0.0 ? cfg.max_factor : cfg.safety * std::pow(e, -0.2);
    factor = std::clamp(factor, cfg.min_factor, cfg.max_factor);

    if (e <= 1.0) {
      sol.segments.push_back(dp.segment(t, h_try, y, y_new));
      t = clipped ? target : t + h_try;
      y = y_new;
      dp.advance();
      ++sol.accepted_steps;
      sol.max_error_estimate = std::max(sol.max_error_estimate, e);
      if (last_rejected) factor = std::min(factor, 1.0);
      last_rejected = false;
      // A step clipped to hit a target says nothing about the natural size.
      h = clipped ? std::max(h, h_try * factor) : h_try * factor;
    } else {
      ++sol.rejected_steps;
      last_rejected = true;
      h = h_try * factor;
    }
  }

  for (double p : points) sol.samples.push_back(sample(sol, p));
  return sol;
}

RefSolution rk45_solve(const std::vector<Expr>& rhs, const std::vector<std::string>& unknowns,
                       std::vector<double> y0, double t0, double t_end,
                       std::vector<double> points, const RefConfig& cfg) {
  if (rhs.size() != unknowns.size() || y0.size() != unknowns.size()) {
    throw ValidationError("right-hand sides, unknowns and initial values must match in size");
  }
  for (const auto& e : rhs) {
    if (contains_integral(e) || contains_derivative(e)) {
      throw UnsupportedNode("reference integration needs an explicit first-order system");
    }
  }
  OdeRhs f = [&](double t, std::span<const double> y, std::span<double> dydt) {
    NumericBinding b;
    b.t = t;
    for (std::size_t j = 0; j < unknowns.size(); ++j) b.values.emplace(unknowns[j], y[j]);
    for (std::size_t j = 0; j < rhs.size(); ++j) dydt[j] = eval_numeric(rhs[j], b);
  };
  return rk45_solve(f, std::move(y0), t0, t_end, std::move(points), cfg);
}

std::vector<double> sample(const RefSolution& sol, double t) {
  if (t == sol.t0) return sol.y0;
  if (sol.segments.empty() || t < sol.t0 || t > sol.segments.back().t + sol.segments.back().h) {
    throw OutOfSpan("t = " + std::to_string(t) + " is outside the integrated span [" +
                    std::to_string(sol.t0) + ", " + std::to_string(sol.t_end) + "]");
  }
  auto it = std::upper_bound(sol.segments.begin(), sol.segments.end(), t,
                             [](double x, const RefSegment& s) { return x < s.t; });
  const RefSegment& seg = *std::prev(it);
  if (t == seg.t + seg.h) return seg.y_end;
  return interpolate(seg, t);
}

RefSolution reference_for_problem(const ProblemSpec& spec, double t_end, const RefConfig& cfg) {
  std::vector<Expr> rhs;
  std::vector<double> y0;
  for (const auto& name : spec.unknowns) {
    const Equation& eq = spec.equation_for(name);
    const auto* d = std::get_if<Derivative>(&eq.lhs.node().value);
    if (eq.order != 1 || !d || d->name != name || d->order != 1 || d->scale != 1.0) {
      throw ValidationError("reference integration needs equations of the form diff(" + name +
                            ", 1) = f(t, y)");
    }
    rhs.push_back(eq.rhs);
    y0.push_back(spec.init.at(name).front());
  }
  std::vector<double> points;
  for (double p : spec.points) {
    if (p >= spec.t0 && p <= t_end) points.push_back(p);
  }
  return rk45_solve(rhs, spec.unknowns, std::move(y0), spec.t0, t_end, std::move(points), cfg);
}

std::vector<ErrorRow> error_table(const ProblemSpec& spec, const SolutionSeries& sol,
                                  std::string_view unknown, const RefSolution& ref,
                                  std::size_t component) {
  return error_table(spec, sol, unknown,
                     [&](double t) { return sample(ref, t).at(component); });
}

}  // namespace dtm
