#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dtm/expr.hpp"
#include "dtm/solver.hpp"

namespace dtm {

struct RefConfig {
  double atol = 1e-12;
  double rtol = 1e-8;
  /// 0 selects a starting step automatically.
  double initial_step = 0.0;
  int max_steps = 200000;
  double safety = 0.9;
  double min_factor = 0.2;
  double max_factor = 10.0;
  /// Make every requested point an exact step endpoint.
  bool stop_at_points = false;
  /// Constant step without error control (used for convergence-order checks).
  std::optional<double> fixed_step;
};

/// dy/dt = f(t, y), written into `dydt`.
using OdeRhs = std::function<void(double t, std::span<const double> y, std::span<double> dydt)>;

/// One accepted step with its continuous extension.
struct RefSegment {
  double t;
  double h;
  std::vector<double> y_end;
  /// Coefficients of the 4th-order interpolant on [t, t + h].
  std::array<std::vector<double>, 5> dense;
};

struct RefSolution {
  double t0 = 0.0;
  double t_end = 0.0;
  std::vector<double> y0;
  std::vector<double> points;
  /// State at each requested point.
  std::vector<std::vector<double>> samples;
  int accepted_steps = 0;
  int rejected_steps = 0;
  /// Largest normalised local error estimate among accepted steps (<= 1).
  double max_error_estimate = 0.0;
  std::vector<RefSegment> segments;
};

/// Adaptive Dormand-Prince 5(4) integration of y' = f(t, y) from t0 to t_end
/// (t_end >= t0), sampled at `points` through the dense-output interpolant.
/// A step is accepted when the RMS of err_i / (atol + rtol max(|y_i|, |ynew_i|))
/// is at most 1; the next step is h * clamp(safety * err^(-1/5)).
/// Throws MaxStepsExceeded or StepUnderflow.
RefSolution rk45_solve(const OdeRhs& rhs, std::vector<double> y0, double t0, double t_end,
                       std::vector<double> points, const RefConfig& cfg = {});

/// Same for an explicit first-order system given as expressions in t and the
/// unknowns (rhs[j] is the derivative of unknowns[j]).
RefSolution rk45_solve(const std::vector<Expr>& rhs, const std::vector<std::string>& unknowns,
                       std::vector<double> y0, double t0, double t_end,
                       std::vector<double> points, const RefConfig& cfg = {});

/// Interpolated state at t in [t0, t_end]. Returns the stored state exactly
/// at t0 and at step endpoints. Throws OutOfSpan.
std::vector<double> sample(const RefSolution& sol, double t);

/// Turns a problem made of equations `diff(y, 1) = rhs` into an explicit
/// system and integrates it to t_end. Throws ValidationError otherwise.
RefSolution reference_for_problem(const ProblemSpec& spec, double t_end,
                                  const RefConfig& cfg = {});

/// Error table against a sampled component of a reference solution.
std::vector<ErrorRow> error_table(const ProblemSpec& spec, const SolutionSeries& sol,
                                  std::string_view unknown, const RefSolution& ref,
                                  std::size_t component);

}  // namespace dtm
