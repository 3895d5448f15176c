#pragma once

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dtm/problem.hpp"
#include "dtm/series.hpp"

namespace dtm {

/// Both sides of an equation as truncated series.
struct EquationSeries {
  Series lhs;
  Series rhs;
};

/// Composes both sides of `eq` along the coefficient lists in `coeffs`
/// (zero-padded to order + 1). Derivative atoms become coefficient shifts.
EquationSeries equation_series(const Equation& eq, const Seeds& coeffs, double t0, int order);

/// Tolerances of the probe solve: the residual at the trial values 0, 1, 2
/// must be affine within kAffinityTolerance * scale and have slope above
/// kSingularSlopeTolerance * scale, with scale = max(1, |r(0)|).
inline constexpr double kAffinityTolerance = 1e-9;
inline constexpr double kSingularSlopeTolerance = 1e-12;
/// Post-solve residual bound, relative to 1 + max |Y|.
inline constexpr double kResidualTolerance = 1e-10;

/// Determines Y_j(k + m_j) for every equation in declaration order.
///
/// `state` holds the coefficients known so far, each padded to order + 1.
/// Entries that were prescribed in the problem's init are checked against
/// the recurrence instead of solved. Throws SingularStep, NonlinearStep or
/// InconsistentInit.
Seeds step(const ProblemSpec& spec, Seeds state, int k);

struct SolutionSeries {
  std::map<std::string, Series, std::less<>> series;
  /// Largest |lhs - rhs| coefficient over the determined range, per equation.
  std::vector<double> max_residual;

  const Series& operator[](std::string_view unknown) const;
};

/// Runs the recurrence to the problem's order and checks the residual of
/// every equation (ResidualError on failure). Step errors carry the step index.
SolutionSeries solve(const ProblemSpec& spec);

struct ErrorRow {
  double t;
  double approx;
  double reference;
  double abs_error;
};

/// |y(t) - approximation(t)| at the problem's points.
std::vector<ErrorRow> error_table(const ProblemSpec& spec, const SolutionSeries& sol,
                                  std::string_view unknown,
                                  const std::function<double(double)>& reference);

/// Same, with the reference given by the problem's exact expression for
/// `unknown` (or by `exact` when passed explicitly).
std::vector<ErrorRow> error_table(const ProblemSpec& spec, const SolutionSeries& sol,
                                  std::string_view unknown);
std::vector<ErrorRow> error_table(const ProblemSpec& spec, const SolutionSeries& sol,
                                  std::string_view unknown, const Expr& exact);

}  // namespace dtm
