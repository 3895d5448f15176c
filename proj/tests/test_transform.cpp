#include <array>
#include <cmath>
#include <functional>
#include <set>

#include "adomian.hpp"
#include "corpus_functions.hpp"
#include "doctest.h"
#include "dtm/error.hpp"
#include "dtm/evaluate.hpp"
#include "dtm/parse.hpp"
#include "dtm/symbolic.hpp"
#include "dtm/transform.hpp"
#include "golden_transforms.hpp"
#include "support.hpp"

using namespace dtm;
using testing::uniform;

namespace {

Expr parse_f(const char* text, const std::vector<std::string>& unknowns) {
  ParseOptions o;
  o.unknowns = unknowns;
  return parse(text, o);
}

Expr parse_symbolic(const char* text) {
  ParseOptions o;
  o.allow_symbols = true;
  return parse(text, o);
}

// Coefficient values for the golden rows: fixed entries as printed, the rest
// drawn from a small box.
Seeds golden_seeds(const testing::GoldenTransform& g, int n) {
  Seeds s;
  for (std::size_t j = 0; j < g.unknowns.size(); ++j) {
    auto& v = s[g.unknowns[j]];
    for (int i = 0; i <= n; ++i) {
      auto it = g.fixed.find(coefficient_symbol(g.unknowns, j, i));
      v.push_back(it != g.fixed.end() ? it->second
                                      : (i == 0 ? uniform(-0.3, 0.3) : uniform(-0.5, 0.5)));
    }
  }
  return s;
}

NumericBinding symbol_binding(const std::vector<std::string>& unknowns, const Seeds& seeds,
                              double t0) {
  NumericBinding b;
  b.values["t0"] = t0;
  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    const auto& v = seeds.at(unknowns[j]);
    for (std::size_t i = 0; i < v.size(); ++i) {
      b.values[coefficient_symbol(unknowns, j, static_cast<int>(i))] = v[i];
    }
  }
  return b;
}

}  // namespace

TEST_CASE("printed transforms of the worked examples agree with both paths") {
  for (const auto& g : testing::golden_transforms()) {
    CAPTURE(std::string(g.label));
    const int n = static_cast<int>(g.terms.size()) - 1;
    const Expr f = parse_f(g.f, g.unknowns);
    const auto sym = dt_recurrence(f, g.unknowns, n);
    std::vector<Expr> printed;
    for (const char* t : g.terms) printed.push_back(parse_symbolic(t));

    for (int trial = 0; trial < 20; ++trial) {
      const Seeds seeds = golden_seeds(g, n);
      const auto composed = dt_compose({f, g.t0, seeds, n});
      const auto recurrent = sym.instantiate(g.t0, seeds);
      const auto binding = symbol_binding(g.unknowns, seeds, g.t0);
      for (int k = 0; k <= n; ++k) {
        CAPTURE(k);
        const double expected = eval_numeric(printed[k], binding);
        CHECK(testing::rel_err(composed[k], expected) <= 1e-12);
        CHECK(testing::rel_err(recurrent[k], expected) <= 1e-12);
      }
    }
  }
}

TEST_CASE("recurrence output for ln(t + y) at t0 = 1 equals the printed list identically") {
  const std::vector<std::string> unknowns{"y"};
  const auto sym = dt_recurrence(parse_f("ln(t + y)", unknowns), unknowns, 4);
  const auto& g = testing::golden_transforms().front();
  for (int k = 0; k <= 4; ++k) {
    CAPTURE(k);
    const Expr at_one = simplify(substitute_symbol(sym.terms[k], "t0", Expr::number(1.0)));
    CHECK_FALSE(contains_symbol(at_one, "t0"));
    // The difference is a rational function of Y(0..k); it vanishes
    // identically iff it vanishes at random points.
    const Expr diff = simplify(sym::sub(at_one, parse_symbolic(g.terms[k])));
    for (int trial = 0; trial < 50; ++trial) {
      NumericBinding b;
      for (int i = 0; i <= 4; ++i) b.values["Y(" + std::to_string(i) + ")"] = uniform(-0.9, 3.0);
      CHECK(std::abs(eval_numeric(diff, b)) <= 1e-12);
    }
  }
  CHECK(to_string(simplify(substitute_symbol(sym.terms[1], "t0", Expr::number(1.0)))) ==
        "Y(1)/(1 + Y(0)) + 1/(1 + Y(0))");
}

TEST_CASE("compose and recurrence agree on the corpus nonlinearities") {
  constexpr int n = 8;
  for (const auto& cf : testing::corpus_functions()) {
    CAPTURE(std::string(cf.text));
    const Expr f = cf.expr();
    const auto sym = dt_recurrence(f, cf.unknowns, n);
    // The acceptance run uses 20 seeds per function; a few suffice here.
    for (int trial = 0; trial < 5; ++trial) {
      const Seeds seeds = cf.random_seeds(n);
      const auto composed = dt_compose({f, cf.t0, seeds, n});
      const auto recurrent = sym.instantiate(cf.t0, seeds);
      CHECK(testing::max_rel_err(composed, recurrent) <= 1e-11);
    }
  }
}

TEST_CASE("F(k) ignores coefficients above k") {
  for (const auto& cf : testing::corpus_functions()) {
    CAPTURE(std::string(cf.text));
    const Expr f = cf.expr();
    const auto sym = dt_recurrence(f, cf.unknowns, 6);
    Seeds seeds = cf.random_seeds(6);
    const auto base = dt_compose({f, cf.t0, seeds, 6});
    const auto base_rec = sym.instantiate(cf.t0, seeds);
    for (int k = 0; k < 6; ++k) {
      Seeds perturbed = seeds;
      for (auto& [name, v] : perturbed) {
        for (int i = k + 1; i <= 6; ++i) v[i] += uniform(-1.0, 1.0);
      }
      const auto c = dt_compose({f, cf.t0, perturbed, 6});
      const auto r = sym.instantiate(cf.t0, perturbed);
      for (int m = 0; m <= k; ++m) {
        CHECK(c[m] == base[m]);
        CHECK(r[m] == base_rec[m]);
      }
    }
    for (int k = 0; k <= 6; ++k) {
      for (const auto& name : symbol_names(sym.terms[k])) {
        if (name == "t0") continue;
        const auto open = name.find('(');
        CHECK(std::stoi(name.substr(open + 1)) <= k);
      }
    }
  }
}

TEST_CASE("F(k) is affine in the top coefficient") {
  for (const auto& cf : testing::corpus_functions()) {
    CAPTURE(std::string(cf.text));
    const Expr f = cf.expr();
    for (int k = 1; k <= 6; ++k) {
      Seeds s = cf.random_seeds(k);
      const std::string& y = cf.unknowns.front();
      std::array<double, 3> v{};
      for (int p = 0; p < 3; ++p) {
        s[y][k] = -0.5 + 0.5 * p;
        v[p] = dt_compose({f, cf.t0, s, k})[k];
      }
      CHECK(std::abs(v[0] - 2 * v[1] + v[2]) <= 1e-12 * std::max(1.0, std::abs(v[1])));
    }
  }
}

TEST_CASE("trivial functions") {
  const std::vector<std::string> u{"y"};
  SUBCASE("f = y returns the seeds") {
    const Seeds s{{"y", {0.3, -1.2, 2.5, 0.7}}};
    const auto c = dt_compose({parse_f("y", u), 0.4, s, 3});
    CHECK(c == s.at("y"));
    const auto r = dt_recurrence(parse_f("y", u), u, 3);
    for (int k = 0; k <= 3; ++k) CHECK(to_string(r.terms[k]) == "Y(" + std::to_string(k) + ")");
  }
  SUBCASE("f = t") {
    const auto r = dt_recurrence(parse_f("t", u), u, 3);
    CHECK(to_string(r.terms[0]) == "t0");
    CHECK(to_string(r.terms[1]) == "1");
    CHECK(to_string(r.terms[2]) == "0");
    CHECK(to_string(r.terms[3]) == "0");
    const auto c = dt_compose({parse_f("t", u), 2.5, {{"y", {0, 0, 0, 0}}}, 3});
    CHECK(c == std::vector<double>{2.5, 1, 0, 0});
  }
  SUBCASE("constant") {
    const auto r = dt_recurrence(parse_f("2.5", u), u, 4);
    CHECK(to_string(r.terms[0]) == "2.5");
    for (int k = 1; k <= 4; ++k) CHECK(to_string(r.terms[k]) == "0");
  }
}

TEST_CASE("autonomous transforms match the Adomian polynomials") {
  const std::vector<std::string> u{"y"};
  for (const auto& c : testing::adomian_cases()) {
    CAPTURE(std::string(c.f));
    const Expr f = parse_f(c.f, u);
    const auto sym = dt_autonomous(f, u, 6);
    for (const auto& term : sym.terms) CHECK_FALSE(contains_symbol(term, "t0"));
    for (int trial = 0; trial < 10; ++trial) {
      const auto y = testing::random_coeffs(7);
      const auto expected = testing::adomian(y, c.dk);
      const Seeds s{{"y", y}};
      CHECK(testing::max_rel_err(sym.instantiate(0.0, s), expected) <= 1e-12);
      CHECK(testing::max_rel_err(dt_compose({f, 0.0, s, 6}), expected) <= 1e-12);
      // The non-autonomous recurrence reduces to the same values.
      CHECK(testing::max_rel_err(dt_recurrence(f, u, 6).instantiate(uniform(-2, 2), s),
                                 expected) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(dt_autonomous(parse_f("t*y", u), u, 2), NotAutonomous);
}

TEST_CASE("structured and literal recurrences agree") {
  for (const auto& cf : testing::corpus_functions()) {
    CAPTURE(std::string(cf.text));
    const Expr f = cf.expr();
    const auto a = dt_recurrence(f, cf.unknowns, 4);
    const auto b = dt_recurrence_direct(f, cf.unknowns, 4);
    for (int trial = 0; trial < 5; ++trial) {
      const Seeds s = cf.random_seeds(4);
      CHECK(testing::max_rel_err(a.instantiate(cf.t0, s), b.instantiate(cf.t0, s)) <= 1e-12);
    }
  }
}

TEST_CASE("multi-variable coefficient symbols") {
  const std::vector<std::string> u{"y1", "y2"};
  CHECK(coefficient_symbol({"y"}, 0, 3) == "Y(3)");
  CHECK(coefficient_symbol(u, 1, 0) == "Y2(0)");
  const auto r = dt_recurrence(parse_f("y1*y2", u), u, 2);
  CHECK(symbol_names(r.terms[2]) ==
        std::set<std::string>{"Y1(0)", "Y1(1)", "Y1(2)", "Y2(0)", "Y2(1)", "Y2(2)"});
}

TEST_CASE("cross validation") {
  const std::vector<std::string> u{"y"};
  SUBCASE("ln(t + y) about t0 = 1") {
    for (int trial = 0; trial < 10; ++trial) {
      Seeds s{{"y", testing::random_coeffs(9, -0.3, 0.3)}};
      s["y"][0] = 0.0;
      const auto cv = dt_cross_validate({parse_f("ln(t + y)", u), 1.0, s, 8});
      CHECK(cv.composed.size() == 9);
      CHECK(cv.max_discrepancy <= 1e-12);
    }
  }
  SUBCASE("f = t") {
    const auto cv = dt_cross_validate({parse_f("t", u), 3.0, {{"y", {1, 2, 3}}}, 2});
    CHECK(cv.max_discrepancy == 0.0);
  }
  SUBCASE("coupled system about t0 = 0") {
    const std::vector<std::string> v{"y1", "y2"};
    const Seeds s{{"y1", {2, -1, 0.5, -1.0 / 6, 1.0 / 24}}, {"y2", {1, -1, 0.5, -1.0 / 6, 1.0 / 24}}};
    const auto cv = dt_cross_validate({parse_f("ln(y1 - 1/(t + y2))", v), 0.0, s, 4});
    CHECK(cv.max_discrepancy <= 1e-12);
  }
}

TEST_CASE("transform errors") {
  const std::vector<std::string> u{"y"};
  CHECK_THROWS_AS(dt_recurrence(parse_f("integral(y)", u), u, 2), UnsupportedNode);
  CHECK_THROWS_AS(dt_recurrence(parse_f("y", u), u, kMaxSymbolicOrder + 1), ValidationError);
  CHECK_THROWS_AS(dt_recurrence(parse_f("y", u), u, -1), ValidationError);
  CHECK_THROWS_AS(dt_compose({parse_f("y", u), 0.0, {{"y", {1, 2}}}, 3}), ValidationError);
  CHECK_THROWS_AS(dt_compose({parse_f("ln(y)", u), 0.0, {{"y", {-1, 2}}}, 1}), DomainError);
  CHECK_THROWS_AS(dt_compose({parse_f("y(2*t)", u), 1.0, {{"y", {1, 2}}}, 1}),
                  NonzeroBasePointScaling);
}
