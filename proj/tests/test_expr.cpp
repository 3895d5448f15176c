#include <doctest.h>

#include <cmath>
#include <functional>

#include "dtm/error.hpp"
#include "dtm/evaluate.hpp"
#include "dtm/parse.hpp"
#include "dtm/symbolic.hpp"
#include "support.hpp"

using namespace dtm;

namespace {

ParseOptions with_unknowns(std::vector<std::string> names) {
  ParseOptions o;
  o.unknowns = std::move(names);
  return o;
}

ParseOptions symbols() {
  ParseOptions o;
  o.allow_symbols = true;
  return o;
}

bool same(const Expr& a, const Expr& b) { return structurally_equal(a, b); }

double eval_at(const Expr& e, std::map<std::string, double, std::less<>> values,
               std::optional<double> t = std::nullopt) {
  return eval_numeric(e, NumericBinding{t, std::move(values)});
}

// Random trees over t, y, y(q t), numbers and the supported operators.
Expr random_tree(int depth) {
  const int pick = static_cast<int>(testing::uniform(0, depth <= 0 ? 4 : 11));
  switch (pick) {
    case 0: return Expr::time();
    case 1: return Expr::unknown("y");
    case 2: return Expr::unknown("y", 3.0);
    case 3: {
      static const double values[] = {0, 1, 2, -3, 0.5, -0.1, 1e-3, 12345.678};
      return Expr::number(values[static_cast<int>(testing::uniform(0, 8))]);
    }
    case 4: return Expr::unary(UnaryOp::neg, random_tree(depth - 1));
    case 5: {
      static const UnaryOp ops[] = {UnaryOp::exp, UnaryOp::ln,   UnaryOp::sin,
                                    UnaryOp::cos, UnaryOp::tan,  UnaryOp::sec,
                                    UnaryOp::asin, UnaryOp::atan, UnaryOp::sqrt_pos,
                                    UnaryOp::sqrt_neg};
      return Expr::unary(ops[static_cast<int>(testing::uniform(0, 10))], random_tree(depth - 1));
    }
    case 6: {
      static const double exps[] = {2, 3, -1, 0.5, -2.5};
      return Expr::binary(BinaryOp::pow, random_tree(depth - 1),
                          Expr::number(exps[static_cast<int>(testing::uniform(0, 5))]));
    }
    case 7: return Expr::integral(random_tree(depth - 1));
    default: {
      static const BinaryOp ops[] = {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div};
      return Expr::binary(ops[static_cast<int>(testing::uniform(0, 4))], random_tree(depth - 1),
                          random_tree(depth - 1));
    }
  }
}

// Random trees over symbols a, b and numbers, for simplify/diff_sym checks.
Expr random_symbolic(int depth) {
  const int pick = static_cast<int>(testing::uniform(0, depth <= 0 ? 3 : 9));
  switch (pick) {
    case 0: return Expr::symbol("a");
    case 1: return Expr::symbol("b");
    case 2: {
      static const double values[] = {0, 1, -1, 2, 0.5, 3};
      return Expr::number(values[static_cast<int>(testing::uniform(0, 6))]);
    }
    case 3: return Expr::unary(UnaryOp::neg, random_symbolic(depth - 1));
    case 4: {
      static const UnaryOp ops[] = {UnaryOp::exp, UnaryOp::sin, UnaryOp::cos, UnaryOp::atan};
      return Expr::unary(ops[static_cast<int>(testing::uniform(0, 4))], random_symbolic(depth - 1));
    }
    case 5:
      return Expr::binary(BinaryOp::pow, random_symbolic(depth - 1),
                          Expr::number(static_cast<int>(testing::uniform(0, 4))));
    default: {
      static const BinaryOp ops[] = {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div};
      return Expr::binary(ops[static_cast<int>(testing::uniform(0, 4))], random_symbolic(depth - 1),
                          random_symbolic(depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const auto opts = with_unknowns({"y"});
  const Expr e = parse("ln(t + y)", opts);
  CHECK(same(e, Expr::unary(UnaryOp::ln, Expr::time() + Expr::unknown("y"))));

  const Expr q = parse("sec(t)^2/(1 + y^2)", opts);
  const auto* b = std::get_if<Binary>(&q.node().value);
  REQUIRE(b);
  CHECK(b->op == BinaryOp::div);
  CHECK(same(b->lhs, Expr::binary(BinaryOp::pow, Expr::unary(UnaryOp::sec, Expr::time()),
                                  Expr::number(2))));

  const Expr d = parse("y1(3*t)^2/(3*t+1)^2", with_unknowns({"y1"}));
  const auto* db = std::get_if<Binary>(&d.node().value);
  REQUIRE(db);
  const auto* num = std::get_if<Binary>(&db->lhs.node().value);
  REQUIRE(num);
  CHECK(num->op == BinaryOp::pow);
  CHECK(same(num->lhs, Expr::unknown("y1", 3.0)));
}

TEST_CASE("operator precedence and associativity") {
  const auto opts = with_unknowns({"y"});
  CHECK(same(parse("1 - 2 - 3"), Expr::number(1) - Expr::number(2) - Expr::number(3)));
  CHECK(same(parse("8 / 4 / 2"), Expr::number(8) / Expr::number(4) / Expr::number(2)));
  CHECK(same(parse("1 + 2 * 3"), Expr::number(1) + Expr::number(2) * Expr::number(3)));
  // ^ binds tighter than unary minus: -y^2 = -(y^2).
  CHECK(same(parse("-y^2", opts),
             -Expr::binary(BinaryOp::pow, Expr::unknown("y"), Expr::number(2))));
  CHECK(eval_at(parse("-2^2"), {}) == -4.0);
  CHECK(eval_at(parse("2^3^2"), {}) == 512.0);
  CHECK(eval_at(parse("(1+2)*3"), {}) == 9.0);
  CHECK(eval_at(parse("  2 *\t( 3 +4 )"), {}) == 14.0);
  CHECK(eval_at(parse("1.5e2 + 2E-1"), {}) == 150.2);
  CHECK(eval_at(parse("y^-1", opts), {{"y", 4.0}}) == 0.25);
}

TEST_CASE("parse errors carry positions") {
  const auto opts = with_unknowns({"y"});
  CHECK_THROWS_AS(parse("", opts), ParseError);
  CHECK_THROWS_AS(parse("1 +", opts), ParseError);
  CHECK_THROWS_AS(parse("(1 + 2", opts), ParseError);
  CHECK_THROWS_AS(parse("z + 1", opts), ParseError);
  CHECK_THROWS_AS(parse("foo(t)", opts), ParseError);
  CHECK_THROWS_AS(parse("y^y", opts), ParseError);
  CHECK_THROWS_AS(parse("1 2", opts), ParseError);
  CHECK_THROWS_AS(parse("diff(y, 1)", opts), ParseError);
  CHECK_THROWS_AS(parse("Y(0)", opts), ParseError);
  try {
    parse("1 + * 2", opts);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
    CHECK(e.category() == "parse");
  }
}

TEST_CASE("declare_on_use and special atoms") {
  ParseOptions o;
  o.declare_on_use = true;
  CHECK(unknown_names(parse("u + v*w", o)) == std::set<std::string>{"u", "v", "w"});

  ParseOptions d = with_unknowns({"y"});
  d.allow_derivatives = true;
  const Expr e = parse("diff(y, 2, scale=1/2) + diff(y, 1)", d);
  CHECK(contains_derivative(e));
  const auto* b = std::get_if<Binary>(&e.node().value);
  REQUIRE(b);
  const auto* dv = std::get_if<Derivative>(&b->lhs.node().value);
  REQUIRE(dv);
  CHECK(dv->order == 2);
  CHECK(dv->scale == 0.5);

  const Expr s = parse("t0 + Y(3) * Y2(1)", symbols());
  CHECK(symbol_names(s) == std::set<std::string>{"t0", "Y(3)", "Y2(1)"});
  CHECK(same(parse("nsqrt(t)"), Expr::unary(UnaryOp::sqrt_neg, Expr::time())));
}

TEST_CASE("print then parse is the identity") {
  ParseOptions o = with_unknowns({"y"});
  o.allow_derivatives = true;
  for (int trial = 0; trial < 300; ++trial) {
    const Expr e = random_tree(5);
    const std::string text = to_string(e);
    INFO(text);
    CHECK(same(parse(text, o), e));
  }
  const Expr dv = Expr::derivative("y", 2, 0.5) + Expr::derivative("y", 1);
  CHECK(same(parse(to_string(dv), o), dv));
  const Expr sy = Expr::symbol("t0") * Expr::symbol("Y(2)") - Expr::symbol("Y1(0)");
  CHECK(same(parse(to_string(sy), symbols()), sy));
}

TEST_CASE("simplify") {
  const Expr y1 = Expr::symbol("Y1");
  CHECK(same(simplify((y1 + Expr::number(0)) * Expr::number(1)), y1));
  CHECK(same(simplify(Expr::number(2) * Expr::number(3)), Expr::number(6)));
  CHECK(same(simplify(Expr::unary(UnaryOp::sin, Expr::number(0))), Expr::number(0)));
  CHECK(same(simplify(y1 * Expr::number(0)), Expr::number(0)));
  CHECK(same(simplify(Expr::binary(BinaryOp::pow, y1, Expr::number(1))), y1));
  CHECK(same(simplify(Expr::binary(BinaryOp::pow, y1, Expr::number(0))), Expr::number(1)));
  CHECK(same(simplify(-(-y1)), y1));
  // Folding never produces non-finite constants.
  CHECK_FALSE(simplify(Expr::number(1) / Expr::number(0)).as_number());
  CHECK_FALSE(simplify(Expr::unary(UnaryOp::ln, Expr::number(-1))).as_number());

  for (int trial = 0; trial < 300; ++trial) {
    const Expr e = random_symbolic(5);
    const Expr s = simplify(e);
    INFO(to_string(e));
    CHECK(same(simplify(s), s));
    const double a = testing::uniform(0.2, 1.5), b = testing::uniform(0.2, 1.5);
    double ve = 0.0;
    try {
      ve = eval_at(e, {{"a", a}, {"b", b}});
    } catch (const DomainError&) {
      continue;
    }
    if (!std::isfinite(ve) || std::abs(ve) > 1e8) continue;
    const double vs = eval_at(s, {{"a", a}, {"b", b}});
    CHECK(testing::rel_err(ve, vs) <= 1e-12);
  }
}

TEST_CASE("diff_sym") {
  const Expr t0 = Expr::symbol("t0");
  const Expr y0 = Expr::symbol("Y0");
  const Expr y1 = Expr::symbol("Y1");

  const Expr d = diff_sym(Expr::unary(UnaryOp::ln, t0 + y0), "t0");
  for (double x : {0.5, 1.0, 2.5}) {
    CHECK(eval_at(d, {{"t0", 1.0}, {"Y0", x}}) == doctest::Approx(1.0 / (1.0 + x)));
  }
  CHECK(same(diff_sym(Expr::number(4.2), "Y1"), Expr::number(0)));
  CHECK(same(diff_sym(y0, "Y1"), Expr::number(0)));
  const Expr p = diff_sym(y0 * Expr::binary(BinaryOp::pow, y1, Expr::number(2)), "Y1");
  CHECK(to_string(p) == "2*(Y0*Y1)");

  CHECK_THROWS_AS(diff_sym(Expr::time(), "t0"), UnsupportedNode);
  CHECK_THROWS_AS(diff_sym(Expr::unknown("y"), "Y0"), UnsupportedNode);
  CHECK_THROWS_AS(diff_sym(Expr::integral(y0), "Y0"), UnsupportedNode);
}

TEST_CASE("diff_sym agrees with central differences") {
  const std::vector<std::string> funcs = {
      "ln(a + b)", "sin(a*b)", "sqrt(a + b^2)", "nsqrt(a + b^2)", "asin(a - b)", "atan(a*b)",
      "sec(a)^2/(1 + b^2)", "tan(a - b)", "exp(a)*cos(b)", "a^2.5/b", "4/a - ln(a + b)",
      "ln(a - 1/(b + a))"};
  for (const auto& text : funcs) {
    ParseOptions o;
    o.declare_on_use = true;
    // Unknowns a, b are turned into symbols so diff_sym accepts them.
    const Expr e = substitute(parse(text, o), [](const Node& n) -> std::optional<Expr> {
      if (const auto* u = std::get_if<Unknown>(&n.value)) return Expr::symbol(u->name);
      return std::nullopt;
    });
    for (const char* var : {"a", "b"}) {
      const Expr de = diff_sym(e, var);
      for (int trial = 0; trial < 10; ++trial) {
        std::map<std::string, double, std::less<>> at{{"a", testing::uniform(0.9, 1.2)},
                                                      {"b", testing::uniform(0.3, 0.5)}};
        const double x = at[var];
        const double h = 1e-6 * std::max(1.0, std::abs(x));
        auto plus = at, minus = at;
        plus[var] = x + h;
        minus[var] = x - h;
        const double fd = (eval_at(e, plus) - eval_at(e, minus)) / (2 * h);
        const double exact = eval_at(de, at);
        INFO(text, " d/d", var);
        CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST_CASE("eval_numeric") {
  ParseOptions o = with_unknowns({"y1", "y2"});
  CHECK(eval_at(parse("exp(t-1) - t"), {}, 2.0) == doctest::Approx(std::exp(1.0) - 2.0));
  CHECK(eval_at(parse("4/y1 - ln(t + y2)", o), {{"y1", 2}, {"y2", 1}}, 0.0) == 2.0);
  CHECK(eval_at(parse("(1+Y(1))/(1+Y(0))", symbols()), {{"Y(0)", 0}, {"Y(1)", 1}}) == 2.0);
  CHECK(eval_at(parse("sec(t)"), {}, 0.3) == 1.0 / std::cos(0.3));
  CHECK(eval_at(parse("nsqrt(4)"), {}) == -2.0);

  CHECK_THROWS_AS(eval_at(parse("t"), {}), UnboundSymbol);
  CHECK_THROWS_AS(eval_at(parse("y1", o), {}), UnboundSymbol);
  CHECK_THROWS_AS(eval_at(parse("ln(t)"), {}, -1.0), DomainError);
  CHECK_THROWS_AS(eval_at(parse("asin(t)"), {}, 2.0), DomainError);
  CHECK_THROWS_AS(eval_at(parse("integral(t)"), {}, 1.0), UnsupportedNode);
  try {
    eval_at(parse("y2 + 1", o), {});
  } catch (const UnboundSymbol& e) {
    CHECK(e.name() == "y2");
    CHECK(e.category() == "unbound");
  }
}

TEST_CASE("eval_series") {
  const auto opts = with_unknowns({"y"});
  SUBCASE("sqrt(t + y^2) along (t-1)/2") {
    const Series y(1.0, {0, 0.5, 0, 0, 0, 0});
    const Series s = eval_series(parse("sqrt(t + y^2)", opts), {{"y", y}}, 1.0, 5);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == 0.5);
    for (std::size_t i = 2; i < 6; ++i) CHECK(std::abs(s[i]) <= 1e-15);
  }
  SUBCASE("time") {
    CHECK(testing::coeffs(eval_series(parse("t"), {}, 5.0, 3)) == std::vector<double>{5, 1, 0, 0});
    CHECK(testing::coeffs(eval_series(parse("t"), {}, 5.0, 0)) == std::vector<double>{5});
  }
  SUBCASE("integral collapses to t") {
    // y = tan(t): sec^2/(1 + tan^2) = 1.
    const Series y = tan(Series::time_var(0.0, 9));
    const Series s = eval_series(parse("integral(sec(t)^2/(1 + y^2))", opts), {{"y", y}}, 0.0, 9);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t i = 2; i < 10; ++i) CHECK(std::abs(s[i]) <= 1e-14);
  }
  SUBCASE("inside an integral t is the dummy variable") {
    CHECK(testing::coeffs(eval_series(parse("integral(t)"), {}, 0.0, 3)) ==
          std::vector<double>{0, 0, 0.5, 0});
    // integral_{1}^{t} tau dtau = (t^2 - 1)/2 = lambda + lambda^2/2.
    CHECK(testing::coeffs(eval_series(parse("integral(t)"), {}, 1.0, 3)) ==
          std::vector<double>{0, 1, 0.5, 0});
  }
  SUBCASE("scaled unknowns and derivative atoms") {
    ParseOptions d = opts;
    d.allow_derivatives = true;
    const Series y(0.0, {1, 1, 1, 1});
    CHECK(testing::coeffs(eval_series(parse("y(3*t)", d), {{"y", y}}, 0.0, 3)) ==
          std::vector<double>{1, 3, 9, 27});
    // d/dt [y(t/2)] = (1/2) y'(t/2): coefficients (i+1) q^(i+1) Y(i+1).
    CHECK(testing::coeffs(eval_series(parse("diff(y, 1, scale=1/2)", d), {{"y", y}}, 0.0, 3)) ==
          std::vector<double>{0.5, 0.5, 0.375, 0});
    CHECK(testing::coeffs(eval_series(parse("diff(y, 2)", d), {{"y", y}}, 0.0, 3)) ==
          std::vector<double>{2, 6, 0, 0});
    CHECK_THROWS_AS(eval_series(parse("y(3*t)", d), {{"y", Series(1.0, {1, 1, 1, 1})}}, 1.0, 3),
                    NonzeroBasePointScaling);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(eval_series(parse("y", opts), {}, 0.0, 3), UnboundSymbol);
    CHECK_THROWS_AS(eval_series(parse("y", opts), {{"y", Series(0.0, {1, 2})}}, 0.0, 3),
                    MismatchError);
    try {
      eval_series(parse("1 + ln(t - 1)"), {}, 0.5, 3);
      FAIL("expected a domain error");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("ln(t - 1)") != std::string::npos);
    }
  }
}

TEST_CASE("polynomial series coefficients are scaled derivatives") {
  const auto opts = with_unknowns({"y"});
  const Expr e = parse("3*t^3 - t*y^2 + 2*y - 0.5", opts);
  // y(t) = 1 + 2 (t - t0) - (t - t0)^2
  for (int trial = 0; trial < 5; ++trial) {
    const double t0 = testing::uniform(-1, 1);
    const Series y(t0, {1, 2, -1, 0, 0});
    const Series s = eval_series(e, {{"y", y}}, t0, 4);
    const auto g = [&](double t) {
      const double x = t - t0;
      return eval_at(e, {{"y", 1 + 2 * x - x * x}}, t);
    };
    // Central differences for orders 1 and 2.
    const double h = 1e-4;
    const double d1 = (g(t0 + h) - g(t0 - h)) / (2 * h);
    const double d2 = (g(t0 + h) - 2 * g(t0) + g(t0 - h)) / (h * h);
    CHECK(s[0] == doctest::Approx(g(t0)).epsilon(1e-12));
    CHECK(std::abs(s[1] - d1) <= 1e-6 * std::max(1.0, std::abs(d1)));
    CHECK(std::abs(s[2] - d2 / 2) <= 1e-6 * std::max(1.0, std::abs(d2)));
  }
}

TEST_CASE("dag helpers") {
  const Expr y = Expr::unknown("y");
  const Expr shared = y * y;
  const Expr e = shared + shared;
  CHECK(dag_size(e) == 3);
  CHECK(contains_unknown(e));
  CHECK_FALSE(contains_time(e));
  CHECK(contains_integral(Expr::integral(Expr::time())));
  CHECK(contains_symbol(Expr::symbol("t0") + Expr::number(1), "t0"));
}
