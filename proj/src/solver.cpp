#include "dtm/solver.hpp"

#include <algorithm>
#include <cmath>

#include "dtm/error.hpp"
#include "dtm/evaluate.hpp"

namespace dtm {

namespace {

std::vector<double> padded(std::vector<double> c, int order) {
  c.resize(static_cast<std::size_t>(order) + 1, 0.0);
  return c;
}

double residual_coefficient(const Equation& eq, const Seeds& state, double t0, int order, int k) {
  const auto sides = equation_series(eq, state, t0, order);
  return sides.lhs[static_cast<std::size_t>(k)] - sides.rhs[static_cast<std::size_t>(k)];
}

}  // namespace

EquationSeries equation_series(const Equation& eq, const Seeds& coeffs, double t0, int order) {
  SeriesBinding binding;
  for (const auto& [name, c] : coeffs) {
    if (c.size() > static_cast<std::size_t>(order) + 1) {
      throw ValidationError("coefficients of '" + name + "' exceed order " +
                            std::to_string(order));
    }
    binding.emplace(name, Series(t0, padded(c, order)));
  }
  return {eval_series(eq.lhs, binding, t0, order), eval_series(eq.rhs, binding, t0, order)};
}

Seeds step(const ProblemSpec& spec, Seeds state, int k) {
  for (const auto& eq : spec.equations) {
    const int top = k + eq.order;
    if (top > spec.order) continue;
    auto& coeffs = state.at(eq.solves_for);
    const auto slot = static_cast<std::size_t>(top);
    const auto& init = spec.init.at(eq.solves_for);

    if (slot < init.size()) {
      coeffs[slot] = init[slot];
      const auto sides = equation_series(eq, state, spec.t0, spec.order);
      const double l = sides.lhs[static_cast<std::size_t>(k)];
      const double r = sides.rhs[static_cast<std::size_t>(k)];
      const double scale = std::max({1.0, std::abs(l), std::abs(r)});
      if (std::abs(l - r) > kAffinityTolerance * scale) {
        throw InconsistentInit("prescribed " + eq.solves_for + " coefficient " +
                               std::to_string(top) + " = " + std::to_string(init[slot]) +
                               " violates the recurrence (residual " +
                               std::to_string(l - r) + ")");
      }
      continue;
    }

    auto probe = [&](double c) {
      coeffs[slot] = c;
      return residual_coefficient(eq, state, spec.t0, spec.order, k);
    };
    const double r0 = probe(0.0);
    const double r1 = probe(1.0);
    const double r2 = probe(2.0);
    const double scale = std::max(1.0, std::abs(r0));
    const double slope = r1 - r0;
    if (std::abs(slope) <= kSingularSlopeTolerance * scale) {
      coeffs[slot] = 0.0;
      throw SingularStep("coefficient " + std::to_string(top) + " of '" + eq.solves_for +
                         "' does not enter its equation at k = " + std::to_string(k));
    }
    if (std::abs(r2 - 2.0 * r1 + r0) > kAffinityTolerance * scale) {
      coeffs[slot] = 0.0;
      throw NonlinearStep("equation for '" + eq.solves_for + "' is not affine in coefficient " +
                          std::to_string(top) + " at k = " + std::to_string(k));
    }
    coeffs[slot] = -r0 / slope;
  }
  return state;
}

const Series& SolutionSeries::operator[](std::string_view unknown) const {
  auto it = series.find(unknown);
  if (it == series.end()) {
    throw ValidationError("solution has no unknown '" + std::string(unknown) + "'");
  }
  return it->second;
}

SolutionSeries solve(const ProblemSpec& spec) {
  validate(spec);
  const int n = spec.order;

  Seeds state;
  for (const auto& eq : spec.equations) {
    const auto& init = spec.init.at(eq.solves_for);
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    std::copy_n(init.begin(), eq.order, c.begin());
    state.emplace(eq.solves_for, std::move(c));
  }

  int min_order = n;
  for (const auto& eq : spec.equations) min_order = std::min(min_order, eq.order);
  for (int k = 0; k + min_order <= n; ++k) {
    try {
      state = step(spec, std::move(state), k);
    } catch (Error& e) {
      e.annotate(" (step k = " + std::to_string(k) + ")");
      throw;
    }
  }

  double max_coeff = 0.0;
  for (const auto& [name, c] : state) {
    for (double v : c) max_coeff = std::max(max_coeff, std::abs(v));
  }
  const double bound = kResidualTolerance * (1.0 + max_coeff);

  SolutionSeries sol;
  for (const auto& eq : spec.equations) {
    const auto sides = equation_series(eq, state, spec.t0, n);
    double worst = 0.0;
    for (int k = 0; k + eq.order <= n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      worst = std::max(worst, std::abs(sides.lhs[i] - sides.rhs[i]));
    }
    if (worst > bound) {
      throw ResidualError("residual " + std::to_string(worst) + " of the equation for '" +
                          eq.solves_for + "' exceeds " + std::to_string(bound));
    }
    sol.max_residual.push_back(worst);
  }
  for (auto& [name, c] : state) sol.series.emplace(name, Series(spec.t0, std::move(c)));
  return sol;
}

std::vector<ErrorRow> error_table(const ProblemSpec& spec, const SolutionSeries& sol,
                                  std::string_view unknown,
                                  const std::function<double(double)>& reference) {
  const Series& y = sol[unknown];
  std::vector<ErrorRow> rows;
  rows.reserve(spec.points.size());
  for (double t : spec.points) {
    const double approx = y.eval(t);
    const double ref = reference(t);
    rows.push_back({t, approx, ref, std::abs(approx - ref)});
  }
  return rows;
}

std::vector<ErrorRow> error_table(const ProblemSpec& spec, const SolutionSeries& sol,
                                  std::string_view unknown, const Expr& exact) {
  return error_table(spec, sol, unknown, [&](double t) {
    NumericBinding b;
    b.t = t;
    return eval_numeric(exact, b);
  });
}

std::vector<ErrorRow> error_table(const ProblemSpec& spec, const SolutionSeries& sol,
                                  std::string_view unknown) {
  auto it = spec.exact.find(unknown);
  if (it == spec.exact.end()) {
    throw ValidationError("problem has no exact solution for '" + std::string(unknown) + "'");
  }
  return error_table(spec, sol, unknown, it->second);
}

}  // namespace dtm
