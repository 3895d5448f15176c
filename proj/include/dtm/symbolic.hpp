#pragma once

#include <functional>
#include <optional>
#include <string_view>

#include "dtm/expr.hpp"

namespace dtm {

// Folding constructors. Each applies constant folding and the 0/1 identities
// to its (already simplified) operands, so trees built only through them are
// already in simplify() normal form.
namespace sym {
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr pow(const Expr& base, double exponent);
Expr neg(const Expr& a);
Expr unary(UnaryOp op, const Expr& a);
}  // namespace sym

/// Constant folding, removal of x+0, x*1, x*0, x^1 style identities, sign
/// normalisation and merging of numeric factors (c1*(c2*x) -> (c1 c2)*x,
/// x*(1/y) -> x/y). Idempotent.
Expr simplify(const Expr& e);

/// Partial derivative with respect to the symbol `name`, simplified.
/// Only Number and Symbol atoms are allowed; anything else throws
/// UnsupportedNode.
Expr diff_sym(const Expr& e, std::string_view name);

/// Rebuilds `e`, replacing every atom for which `replace` returns a value.
/// The result is simplified.
Expr substitute(const Expr& e, const std::function<std::optional<Expr>(const Node&)>& replace);

/// Replaces symbol `name` by `value` and simplifies.
Expr substitute_symbol(const Expr& e, std::string_view name, const Expr& value);

}  // namespace dtm
