#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dtm/expr.hpp"
#include "dtm/transform.hpp"

namespace dtm {

/// lhs = rhs, solved for the coefficient Y(k + order) of `solves_for`.
struct Equation {
  Expr lhs;
  Expr rhs;
  std::string solves_for;
  /// Order m of the highest derivative of `solves_for`.
  int order = 1;
  /// Argument scale q of that derivative, as in y'(q t).
  double scale = 1.0;
};

struct ProblemSpec {
  std::string name;
  double t0 = 0.0;
  /// Truncation order N.
  int order = 0;
  std::vector<std::string> unknowns;
  std::vector<Equation> equations;
  /// Prescribed Y_j(0..). At least `order` entries of the unknown's equation;
  /// extra entries are checked against the recurrence.
  Seeds init;
  std::map<std::string, Expr, std::less<>> exact;
  std::vector<double> points;

  const Equation& equation_for(std::string_view unknown) const;
};

/// Parses the line-oriented problem format:
///
///   name: <text>
///   t0: <real>
///   order: <integer>
///   unknown: <ident>                                   (repeatable)
///   eq: <expr> = <expr> solves <ident> order <m> [scale <q>]
///   init <ident>: <real>[, <real> ...]
///   exact <ident>: <expr>
///   points: <real>[, <real> ...]
///
/// '#' starts a comment. Throws ParseError (with the line number in the
/// message) or ValidationError.
ProblemSpec load_problem(std::string_view text);

/// Reads and parses a problem file. Throws IoError if it cannot be read.
ProblemSpec load_problem_file(const std::filesystem::path& path);

/// Structural checks shared by the loader and the solver.
void validate(const ProblemSpec& spec);

/// Copy of `spec` with every sqrt switched to the requested branch.
ProblemSpec with_sqrt_branch(ProblemSpec spec, bool negative);

}  // namespace dtm
