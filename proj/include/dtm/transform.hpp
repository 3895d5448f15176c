#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dtm/expr.hpp"

namespace dtm {

/// Per-unknown differential transform coefficients Y_j(0..).
using Seeds = std::map<std::string, std::vector<double>, std::less<>>;

struct TransformRequest {
  Expr f;
  double t0 = 0.0;
  Seeds seeds;
  /// Highest transform index wanted.
  int order = 0;
};

/// F(0..order) of f(t, y_j(t)) by composing truncated series: t -> t0 + lambda
/// and y_j -> sum_i Y_j(i) lambda^i, then reading off the coefficients.
/// F(k) depends only on seed entries with index <= k.
std::vector<double> dt_compose(const TransformRequest& request);

/// Symbolic transforms F(0..n) over the atoms `t0` and Y_j(i).
struct SymbolicTransform {
  std::vector<std::string> unknowns;
  std::vector<Expr> terms;

  /// Numeric F(0..n) for concrete t0 and coefficients.
  std::vector<double> instantiate(double t0, const Seeds& seeds) const;
};

/// Largest order dt_recurrence accepts; symbolic terms grow quickly past it.
inline constexpr int kMaxSymbolicOrder = 12;

/// Name of the symbol standing for Y_j(i): "Y(i)" when there is a single
/// unknown, otherwise "Y<j>(i)" with j the 1-based position in `unknowns`.
std::string coefficient_symbol(const std::vector<std::string>& unknowns, std::size_t j, int i);

/// F(0..n) from the recurrence
///
///   F(0) = f(t0, Y_j(0)),
///   F(n) = (1/n) [ dF(n-1)/dt0
///                  + sum_j sum_{i=0}^{n-1} (i+1) Y_j(i+1) dF(n-1)/dY_j(i) ].
///
/// The recurrence is carried out on the expanded form
///
///   F(n) = sum c * D * prod_{j, i>=1} Y_j(i)^e,
///   D = d^a/dt0^a prod_j d^(b_j)/dY_j(0)^(b_j) F(0),
///
/// where d/dt0 and d/dY_j(0) raise the order of D and d/dY_j(i), i >= 1, act
/// on the monomial. The partials D come from diff_sym. This keeps F(n) to a
/// few dozen terms where differentiating the whole previous term grows
/// factorially (see dt_recurrence_direct).
///
/// Scaled unknowns y(q t) are expanded as their own coefficient family and
/// then rewritten as q^i Y(i), which fixes t0 = 0 in the result.
/// Throws UnsupportedNode for integrals and derivative atoms, and
/// ValidationError for n outside [0, kMaxSymbolicOrder] or undeclared unknowns.
SymbolicTransform dt_recurrence(const Expr& f, const std::vector<std::string>& unknowns, int n);

/// The same recurrence applied literally: every F(n) is obtained by
/// differentiating the whole expression F(n-1) with diff_sym. Its size grows
/// roughly factorially with n; meant for low orders and for checking
/// dt_recurrence.
SymbolicTransform dt_recurrence_direct(const Expr& f, const std::vector<std::string>& unknowns,
                                       int n);

/// dt_recurrence for f without explicit time dependence. Throws NotAutonomous
/// if f mentions t. The results never mention t0.
SymbolicTransform dt_autonomous(const Expr& f, const std::vector<std::string>& unknowns, int n);

struct CrossValidation {
  std::vector<double> composed;
  std::vector<double> recurrent;
  /// max_k |composed - recurrent| / max(1, |composed|, |recurrent|)
  double max_discrepancy = 0.0;
};

/// Runs both transform paths on the same request and compares them.
CrossValidation dt_cross_validate(const TransformRequest& request);

}  // namespace dtm
