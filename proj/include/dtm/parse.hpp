#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dtm/expr.hpp"

namespace dtm {

struct ParseOptions {
  /// Identifiers accepted as unknowns.
  std::vector<std::string> unknowns;
  /// Treat any other non-reserved identifier as an unknown too.
  bool declare_on_use = false;
  /// Accept `diff(y, m)` and `diff(y, m, scale=q)` atoms.
  bool allow_derivatives = false;
  /// Accept the coefficient symbols `t0`, `Y(i)` and `Yj(i)`.
  bool allow_symbols = false;
};

/// Parses the expression language:
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?            exponent must be constant
///   atom   := NUMBER | 't' | IDENT | IDENT '(' [NUMBER '*'] 't' ')'
///           | FUNC '(' expr ')' | 'integral' '(' expr ')' | '(' expr ')'
///
/// FUNC is one of exp ln sin cos tan sec asin atan sqrt nsqrt. A minus sign
/// directly in front of a number literal is folded into the literal unless
/// the literal is the base of a power. Throws ParseError.
Expr parse(std::string_view text, const ParseOptions& options = {});

}  // namespace dtm
