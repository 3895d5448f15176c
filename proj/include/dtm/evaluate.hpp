#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtm/expr.hpp"
#include "dtm/series.hpp"

namespace dtm {

/// Point values for numeric evaluation. `t` binds the time variable;
/// `values` binds both unknown names and symbol names.
struct NumericBinding {
  std::optional<double> t;
  std::map<std::string, double, std::less<>> values;
};

/// IEEE evaluation; `sec` is 1/cos. Throws UnboundSymbol for missing atoms,
/// DomainError outside a function's domain, and UnsupportedNode for
/// integrals, derivative atoms and scaled unknowns.
double eval_numeric(const Expr& e, const NumericBinding& binding);

/// eval_numeric of several expressions; subtrees they share are evaluated once.
std::vector<double> eval_numeric(const std::vector<Expr>& es, const NumericBinding& binding);

/// Unknown name to its series; all entries share order and base point.
using SeriesBinding = std::map<std::string, Series, std::less<>>;

/// Composes `e` along the bound trajectories as truncated series about t0.
///
/// Time becomes t0 + lambda, `y(q t)` becomes the argument-rescaled series of
/// y, `diff(y, m, scale=q)` becomes the coefficient shift of y rescaled by q,
/// and `integral(body)` integrates the body from t0. Coefficient k of the
/// result is the differential transform of `e` at t0, exact up to rounding.
/// Errors from series operations are annotated with the failing subtree.
Series eval_series(const Expr& e, const SeriesBinding& binding, double t0, int order);

}  // namespace dtm
