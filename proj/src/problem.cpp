#include "dtm/problem.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "dtm/error.hpp"
#include "dtm/parse.hpp"
#include "dtm/symbolic.hpp"

namespace dtm {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void line_error(int line, const std::string& message) {
  throw ParseError("line " + std::to_string(line) + ": " + message, 0);
}

double parse_real(std::string_view text, int line) {
  text = trim(text);
  // Accept simple constant expressions such as 1/2.
  try {
    const auto v = simplify(parse(text)).as_number();
    if (v) return *v;
  } catch (const ParseError& e) {
    line_error(line, e.what());
  }
  line_error(line, "expected a number, got '" + std::string(text) + "'");
}

int parse_int(std::string_view text, int line) {
  text = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    line_error(line, "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> parse_real_list(std::string_view text, int line) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(parse_real(text.substr(0, comma), line));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

// The '=' separating both sides, skipping the one in "scale=" inside diff(...).
std::size_t top_level_equals(std::string_view s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '=' && depth == 0) return i;
  }
  return std::string_view::npos;
}

struct PendingEquation {
  int line;
  std::string lhs, rhs, solves_for;
  int order = 1;
  double scale = 1.0;
};

PendingEquation split_equation(std::string_view text, int line) {
  PendingEquation eq;
  eq.line = line;
  const auto solves = text.rfind(" solves ");
  if (solves == std::string_view::npos) line_error(line, "equation needs 'solves <unknown> order <m>'");
  const std::string_view body = text.substr(0, solves);
  std::istringstream tail{std::string(text.substr(solves + 8))};
  std::string word;
  tail >> eq.solves_for;
  while (tail >> word) {
    std::string value;
    if (!(tail >> value)) line_error(line, "missing value after '" + word + "'");
    if (word == "order") {
      eq.order = parse_int(value, line);
    } else if (word == "scale") {
      eq.scale = parse_real(value, line);
    } else {
      line_error(line, "unexpected '" + word + "' in equation");
    }
  }
  if (eq.solves_for.empty()) line_error(line, "equation does not name its unknown");
  const auto eqpos = top_level_equals(body);
  if (eqpos == std::string_view::npos) line_error(line, "equation needs '='");
  eq.lhs = std::string(trim(body.substr(0, eqpos)));
  eq.rhs = std::string(trim(body.substr(eqpos + 1)));
  return eq;
}

Expr parse_at_line(const std::string& text, const ParseOptions& opts, int line) {
  try {
    return parse(text, opts);
  } catch (const ParseError& e) {
    throw ParseError("line " + std::to_string(line) + ": " + e.what(), e.position());
  }
}

void check_derivatives_in_integrals(const Expr& e) {
  any_node(e, [](const Node& n) {
    if (const auto* i = std::get_if<Integral>(&n.value)) {
      if (contains_derivative(i->body)) {
        throw ValidationError("integral bodies may not contain derivative atoms");
      }
    }
    return false;
  });
}

}  // namespace

const Equation& ProblemSpec::equation_for(std::string_view unknown) const {
  for (const auto& eq : equations) {
    if (eq.solves_for == unknown) return eq;
  }
  throw ValidationError("no equation solves for '" + std::string(unknown) + "'");
}

ProblemSpec load_problem(std::string_view text) {
  ProblemSpec spec;
  std::vector<PendingEquation> pending;
  std::vector<std::pair<int, std::pair<std::string, std::string>>> pending_exact;
  bool have_order = false;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) line_error(line_no, "expected '<key>: <value>'");
    const std::string_view key = trim(line.substr(0, colon));
    const std::string_view value = trim(line.substr(colon + 1));

    if (key == "name") {
      spec.name = std::string(value);
    } else if (key == "t0") {
      spec.t0 = parse_real(value, line_no);
    } else if (key == "order") {
      spec.order = parse_int(value, line_no);
      have_order = true;
    } else if (key == "unknown") {
      spec.unknowns.emplace_back(value);
    } else if (key == "eq") {
      pending.push_back(split_equation(value, line_no));
    } else if (key.starts_with("init ")) {
      const std::string name(trim(key.substr(5)));
      if (spec.init.count(name)) line_error(line_no, "duplicate init for '" + name + "'");
      spec.init[name] = parse_real_list(value, line_no);
    } else if (key.starts_with("exact ")) {
      pending_exact.push_back({line_no, {std::string(trim(key.substr(6))), std::string(value)}});
    } else if (key == "points") {
      spec.points = parse_real_list(value, line_no);
    } else {
      line_error(line_no, "unknown key '" + std::string(key) + "'");
    }
  }
  if (!have_order) throw ValidationError("problem has no 'order'");

  ParseOptions opts;
  opts.unknowns = spec.unknowns;
  opts.allow_derivatives = true;
  for (const auto& p : pending) {
    spec.equations.push_back(Equation{parse_at_line(p.lhs, opts, p.line),
                                      parse_at_line(p.rhs, opts, p.line), p.solves_for,
                                      p.order, p.scale});
  }
  ParseOptions exact_opts;
  for (const auto& [line, entry] : pending_exact) {
    spec.exact.emplace(entry.first, parse_at_line(entry.second, exact_opts, line));
  }
  validate(spec);
  return spec;
}

ProblemSpec load_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open problem file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read problem file '" + path.string() + "'");
  return load_problem(buf.str());
}

void validate(const ProblemSpec& spec) {
  if (spec.unknowns.empty()) throw ValidationError("problem declares no unknowns");
  for (std::size_t i = 0; i < spec.unknowns.size(); ++i) {
    const auto& u = spec.unknowns[i];
    if (std::count(spec.unknowns.begin(), spec.unknowns.end(), u) > 1) {
      throw ValidationError("unknown '" + u + "' declared twice");
    }
  }
  if (spec.equations.size() != spec.unknowns.size()) {
    throw ValidationError("expected one equation per unknown (" +
                          std::to_string(spec.unknowns.size()) + " unknowns, " +
                          std::to_string(spec.equations.size()) + " equations)");
  }

  auto position = [&](const std::string& name) {
    for (std::size_t i = 0; i < spec.equations.size(); ++i) {
      if (spec.equations[i].solves_for == name) return i;
    }
    throw ValidationError("no equation solves for '" + name + "'");
  };

  for (std::size_t i = 0; i < spec.equations.size(); ++i) {
    const auto& eq = spec.equations[i];
    if (std::find(spec.unknowns.begin(), spec.unknowns.end(), eq.solves_for) ==
        spec.unknowns.end()) {
      throw ValidationError("equation solves for undeclared unknown '" + eq.solves_for + "'");
    }
    if (position(eq.solves_for) != i) {
      throw ValidationError("two equations solve for '" + eq.solves_for + "'");
    }
    if (eq.order < 1) throw ValidationError("equation derivative order must be at least 1");
    if (spec.order < eq.order) {
      throw ValidationError("order " + std::to_string(spec.order) +
                            " is below the derivative order of the equation for '" +
                            eq.solves_for + "'");
    }
    auto it = spec.init.find(eq.solves_for);
    if (it == spec.init.end()) {
      throw ValidationError("missing init for '" + eq.solves_for + "'");
    }
    if (it->second.size() < static_cast<std::size_t>(eq.order)) {
      throw ValidationError("init for '" + eq.solves_for + "' needs " +
                            std::to_string(eq.order) + " values");
    }

    bool has_top = false;
    for (const Expr* side : {&eq.lhs, &eq.rhs}) {
      check_derivatives_in_integrals(*side);
      any_node(*side, [&](const Node& n) {
        const auto* d = std::get_if<Derivative>(&n.value);
        const auto* u = std::get_if<Unknown>(&n.value);
        if ((d && d->scale != 1.0) || (u && u->scale != 1.0)) {
          if (spec.t0 != 0.0) {
            throw ValidationError("scaled arguments need an expansion about t0 = 0");
          }
        }
        if (!d) return false;
        const std::size_t owner = position(d->name);
        const int m = spec.equations[owner].order;
        if (d->order > m) {
          throw ValidationError("diff(" + d->name + ", " + std::to_string(d->order) +
                                ") exceeds the order of its equation");
        }
        // The top coefficient of another unknown is only known once its own
        // equation has been stepped.
        if (d->order == m && owner > i) {
          throw ValidationError("diff(" + d->name + ", " + std::to_string(m) +
                                ") is used before the equation that determines it");
        }
        if (d->name == eq.solves_for && d->order == eq.order && d->scale == eq.scale) {
          has_top = true;
        }
        return false;
      });
    }
    if (!has_top) {
      throw ValidationError("equation for '" + eq.solves_for + "' has no diff(" + eq.solves_for +
                            ", " + std::to_string(eq.order) + ") term with the declared scale");
    }
  }
  for (const auto& [name, init] : spec.init) {
    if (std::find(spec.unknowns.begin(), spec.unknowns.end(), name) == spec.unknowns.end()) {
      throw ValidationError("init given for undeclared unknown '" + name + "'");
    }
  }
  for (const auto& [name, e] : spec.exact) {
    if (std::find(spec.unknowns.begin(), spec.unknowns.end(), name) == spec.unknowns.end()) {
      throw ValidationError("exact solution given for undeclared unknown '" + name + "'");
    }
  }
}

ProblemSpec with_sqrt_branch(ProblemSpec spec, bool negative) {
  const UnaryOp target = negative ? UnaryOp::sqrt_neg : UnaryOp::sqrt_pos;
  std::function<Expr(const Expr&)> flip = [&](const Expr& e) -> Expr {
    return substitute(e, [&](const Node& n) -> std::optional<Expr> {
      const auto* u = std::get_if<Unary>(&n.value);
      if (!u || (u->op != UnaryOp::sqrt_pos && u->op != UnaryOp::sqrt_neg)) return std::nullopt;
      return Expr::unary(target, flip(u->arg));
    });
  };
  for (auto& eq : spec.equations) {
    eq.lhs = flip(eq.lhs);
    eq.rhs = flip(eq.rhs);
  }
  return spec;
}

}  // namespace dtm
