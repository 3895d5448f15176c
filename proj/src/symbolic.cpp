#include "dtm/symbolic.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>

#include "dtm/error.hpp"
#include "scalar.hpp"

namespace dtm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Expr fold_binary(BinaryOp op, const Expr& a, const Expr& b) {
  const auto x = a.as_number();
  const auto y = b.as_number();
  if (x && y) {
    if (auto v = detail::apply_binary(op, *x, *y)) return Expr::number(*v);
  }
  return Expr::binary(op, a, b);
}

// c * x with c a number, as built by sym::mul.
struct Scaled {
  double c;
  Expr x;
};

std::optional<Scaled> as_scaled(const Expr& e) {
  const auto* b = std::get_if<Binary>(&e.node().value);
  if (!b || b->op != BinaryOp::mul) return std::nullopt;
  if (const auto c = b->lhs.as_number()) return Scaled{*c, b->rhs};
  return std::nullopt;
}

// e = c * x, with x absent when e is a number.
std::pair<double, std::optional<Expr>> split(const Expr& e) {
  if (const auto c = e.as_number()) return {*c, std::nullopt};
  if (const auto* u = std::get_if<Unary>(&e.node().value); u && u->op == UnaryOp::neg) {
    auto [c, x] = split(u->arg);
    return {-c, std::move(x)};
  }
  if (auto s = as_scaled(e)) return {s->c, s->x};
  return {1.0, e};
}

// e = base^p with p an integer (p = 1 for anything that is not such a power).
std::pair<Expr, double> integer_power(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node().value); b && b->op == BinaryOp::pow) {
    if (const auto p = b->rhs.as_number(); p && std::trunc(*p) == *p) return {b->lhs, *p};
  }
  return {e, 1.0};
}

// y for e = 1/y.
const Expr* reciprocal(const Expr& e) {
  const auto* b = std::get_if<Binary>(&e.node().value);
  return b && b->op == BinaryOp::div && b->lhs.is_number(1.0) ? &b->rhs : nullptr;
}

const Expr* negated(const Expr& e) {
  const auto* u = std::get_if<Unary>(&e.node().value);
  return u && u->op == UnaryOp::neg ? &u->arg : nullptr;
}

// Structural equality that gives up (returns false) after visiting `budget`
// nodes, so like-term detection stays cheap on large shared DAGs.
bool same_term(const Expr& a, const Expr& b, int& budget) {
  if (a.id() == b.id()) return true;
  if (--budget < 0) return false;
  const auto& va = a.node().value;
  const auto& vb = b.node().value;
  if (va.index() != vb.index()) return false;
  if (const auto* x = std::get_if<Unary>(&va)) {
    const auto& y = std::get<Unary>(vb);
    return x->op == y.op && same_term(x->arg, y.arg, budget);
  }
  if (const auto* x = std::get_if<Binary>(&va)) {
    const auto& y = std::get<Binary>(vb);
    return x->op == y.op && same_term(x->lhs, y.lhs, budget) &&
           same_term(x->rhs, y.rhs, budget);
  }
  if (std::holds_alternative<Integral>(va)) return false;
  return structurally_equal(a, b);
}

}  // namespace

namespace sym {

namespace {

// c1*x + sign*c2*x -> (c1 + sign*c2)*x, also when the left operand is a sum
// whose last term matches.
std::optional<Expr> combine_like(const Expr& a, const Expr& b, double sign) {
  const auto [cb, xb] = split(b);
  if (!xb) return std::nullopt;
  const auto [ca, xa] = split(a);
  int budget = 64;
  if (xa && same_term(*xa, *xb, budget)) return mul(Expr::number(ca + sign * cb), *xa);
  const auto* s = std::get_if<Binary>(&a.node().value);
  if (!s || (s->op != BinaryOp::add && s->op != BinaryOp::sub)) return std::nullopt;
  const double inner = s->op == BinaryOp::add ? 1.0 : -1.0;
  const auto [cr, xr] = split(s->rhs);
  budget = 64;
  if (!xr || !same_term(*xr, *xb, budget)) return std::nullopt;
  return add(s->lhs, mul(Expr::number(inner * cr + sign * cb), *xr));
}

}  // namespace

Expr add(const Expr& a, const Expr& b) {
  if (a.is_number(0.0)) return b;
  if (b.is_number(0.0)) return a;
  if (auto c = combine_like(a, b, 1.0)) return *c;
  if (const Expr* nb = negated(b)) return sub(a, *nb);
  if (const auto s = as_scaled(b); s && s->c < 0) return sub(a, mul(Expr::number(-s->c), s->x));
  return fold_binary(BinaryOp::add, a, b);
}

Expr sub(const Expr& a, const Expr& b) {
  if (b.is_number(0.0)) return a;
  if (a.is_number(0.0)) return neg(b);
  if (auto c = combine_like(a, b, -1.0)) return *c;
  if (const Expr* nb = negated(b)) return add(a, *nb);
  if (const auto s = as_scaled(b); s && s->c < 0) return add(a, mul(Expr::number(-s->c), s->x));
  return fold_binary(BinaryOp::sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) {
  if (a.is_number(0.0) || b.is_number(0.0)) return Expr::number(0.0);
  if (a.is_number(1.0)) return b;
  if (b.is_number(1.0)) return a;
  if (a.is_number(-1.0)) return neg(b);
  if (b.is_number(-1.0)) return neg(a);
  const auto x = a.as_number();
  const auto y = b.as_number();
  if (x && y) return fold_binary(BinaryOp::mul, a, b);
  // Numbers go to the left and merge.
  if (y) return mul(b, a);
  if (const Expr* r = reciprocal(b)) return div(a, *r);
  if (const Expr* r = reciprocal(a)) return div(b, *r);
  if (const Expr* na = negated(a)) return neg(mul(*na, b));
  if (const Expr* nb = negated(b)) return neg(mul(a, *nb));
  if (x) {
    if (const auto s = as_scaled(b)) return mul(Expr::number(*x * s->c), s->x);
    return Expr::binary(BinaryOp::mul, a, b);
  }
  if (const auto s = as_scaled(a)) return mul(Expr::number(s->c), mul(s->x, b));
  if (const auto s = as_scaled(b)) return mul(Expr::number(s->c), mul(a, s->x));
  return Expr::binary(BinaryOp::mul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
  if (b.is_number(1.0)) return a;
  if (a.is_number(0.0) && !b.is_number(0.0)) return Expr::number(0.0);
  if (a.as_number() && b.as_number()) return fold_binary(BinaryOp::div, a, b);
  if (const Expr* na = negated(a)) return neg(div(*na, b));
  if (const Expr* nb = negated(b)) return neg(div(a, *nb));
  // (u / x^p) / x^r = u / x^(p+r)
  if (const auto* inner = std::get_if<Binary>(&a.node().value);
      inner && inner->op == BinaryOp::div) {
    const auto [x, p] = integer_power(inner->rhs);
    const auto [y, r] = integer_power(b);
    int budget = 64;
    if (same_term(x, y, budget)) return div(inner->lhs, pow(x, p + r));
  }
  // (ca xa) / (cb xb) = (ca/cb) (xa/xb)
  const auto [ca, xa] = split(a);
  const auto [cb, xb] = split(b);
  const double q = ca / cb;
  if (!std::isfinite(q) || (ca == 1.0 && cb == 1.0)) return Expr::binary(BinaryOp::div, a, b);
  if (!xb) return mul(Expr::number(q), *xa);
  if (!xa) return Expr::binary(BinaryOp::div, Expr::number(q), *xb);
  return mul(Expr::number(q), div(*xa, *xb));
}

Expr pow(const Expr& base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == 0.0) return Expr::number(1.0);
  return fold_binary(BinaryOp::pow, base, Expr::number(exponent));
}

Expr neg(const Expr& a) {
  if (const auto x = a.as_number()) return Expr::number(-*x);
  if (const Expr* na = negated(a)) return *na;
  if (const auto s = as_scaled(a)) return mul(Expr::number(-s->c), s->x);
  return Expr::unary(UnaryOp::neg, a);
}

Expr unary(UnaryOp op, const Expr& a) {
  if (op == UnaryOp::neg) return neg(a);
  if (const auto x = a.as_number()) {
    if (auto v = detail::apply_unary(op, *x)) return Expr::number(*v);
  }
  return Expr::unary(op, a);
}

}  // namespace sym

namespace {

Expr rebuild(const Expr& e, const std::function<std::optional<Expr>(const Node&)>& replace,
             std::unordered_map<const Node*, Expr>& memo) {
  if (auto it = memo.find(e.id()); it != memo.end()) return it->second;
  if (auto r = replace(e.node())) {
    memo.emplace(e.id(), *r);
    return *r;
  }
  Expr out = e.visit(overloaded{
      [&](const Unary& u) { return sym::unary(u.op, rebuild(u.arg, replace, memo)); },
      [&](const Binary& b) {
        Expr l = rebuild(b.lhs, replace, memo);
        Expr r = rebuild(b.rhs, replace, memo);
        switch (b.op) {
          case BinaryOp::add: return sym::add(l, r);
          case BinaryOp::sub: return sym::sub(l, r);
          case BinaryOp::mul: return sym::mul(l, r);
          case BinaryOp::div: return sym::div(l, r);
          case BinaryOp::pow:
            if (const auto p = r.as_number()) return sym::pow(l, *p);
            return fold_binary(BinaryOp::pow, l, r);
        }
        return e;
      },
      [&](const Integral& i) {
        Expr body = rebuild(i.body, replace, memo);
        return body.id() == i.body.id() ? e : Expr::integral(body);
      },
      [&](const auto&) { return e; },
  });
  memo.emplace(e.id(), out);
  return out;
}

class Differentiator {
 public:
  explicit Differentiator(std::string_view name) : name_(name) {}

  Expr operator()(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Expr d = e.visit(overloaded{
        [&](const Number&) { return Expr::number(0.0); },
        [&](const Symbol& s) { return Expr::number(s.name == name_ ? 1.0 : 0.0); },
        [&](const Unary& u) { return unary(e, u); },
        [&](const Binary& b) { return binary(b); },
        [&](const Time&) -> Expr {
          throw UnsupportedNode("diff_sym: the time variable is not a symbol");
        },
        [&](const Unknown& u) -> Expr {
          throw UnsupportedNode("diff_sym: unknown '" + u.name + "' is not a symbol");
        },
        [&](const Integral&) -> Expr {
          throw UnsupportedNode("diff_sym: integrals cannot be differentiated symbolically");
        },
        [&](const Derivative&) -> Expr {
          throw UnsupportedNode("diff_sym: derivative atoms cannot be differentiated");
        },
    });
    memo_.emplace(e.id(), d);
    return d;
  }

 private:
  Expr unary(const Expr& self, const Unary& u) {
    const Expr du = (*this)(u.arg);
    if (du.is_number(0.0)) return du;
    using namespace sym;
    const Expr& x = u.arg;
    switch (u.op) {
      case UnaryOp::neg: return neg(du);
      case UnaryOp::exp: return mul(self, du);
      case UnaryOp::ln: return div(du, x);
      case UnaryOp::sin: return mul(sym::unary(UnaryOp::cos, x), du);
      case UnaryOp::cos: return neg(mul(sym::unary(UnaryOp::sin, x), du));
      case UnaryOp::tan: return mul(pow(sym::unary(UnaryOp::sec, x), 2.0), du);
      case UnaryOp::sec: return mul(mul(self, sym::unary(UnaryOp::tan, x)), du);
      case UnaryOp::asin:
        return div(du, sym::unary(UnaryOp::sqrt_pos, sub(Expr::number(1.0), pow(x, 2.0))));
      case UnaryOp::atan: return div(du, add(Expr::number(1.0), pow(x, 2.0)));
      // d(+-sqrt x) = dx / (2 (+-sqrt x)); the branch is carried by `self`.
      case UnaryOp::sqrt_pos:
      case UnaryOp::sqrt_neg: return mul(Expr::number(0.5), div(du, self));
    }
    return Expr::number(0.0);
  }

  Expr binary(const Binary& b) {
    using namespace sym;
    const Expr da = (*this)(b.lhs);
    if (b.op == BinaryOp::pow) {
      const auto p = b.rhs.as_number();
      if (!p) throw UnsupportedNode("diff_sym: exponent must be a number");
      if (da.is_number(0.0)) return da;
      return mul(mul(Expr::number(*p), pow(b.lhs, *p - 1.0)), da);
    }
    const Expr db = (*this)(b.rhs);
    switch (b.op) {
      case BinaryOp::add: return add(da, db);
      case BinaryOp::sub: return sub(da, db);
      case BinaryOp::mul: return add(mul(da, b.rhs), mul(b.lhs, db));
      case BinaryOp::div: {
        // b = x^p: a'/x^p - p a x' / x^(p+1). Merging the powers keeps the
        // denominators flat under repeated differentiation; (x^p)^2 nests.
        const auto [x, p] = integer_power(b.rhs);
        const Expr dx = p == 1.0 ? db : (*this)(x);
        return sub(div(da, b.rhs), div(mul(mul(Expr::number(p), b.lhs), dx), pow(x, p + 1.0)));
      }
      case BinaryOp::pow: break;
    }
    return Expr::number(0.0);
  }

  std::string_view name_;
  std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr simplify(const Expr& e) {
  std::unordered_map<const Node*, Expr> memo;
  return rebuild(e, [](const Node&) { return std::optional<Expr>(); }, memo);
}

Expr diff_sym(const Expr& e, std::string_view name) {
  Differentiator d(name);
  return simplify(d(e));
}

Expr substitute(const Expr& e, const std::function<std::optional<Expr>(const Node&)>& replace) {
  std::unordered_map<const Node*, Expr> memo;
  return rebuild(e, replace, memo);
}

Expr substitute_symbol(const Expr& e, std::string_view name, const Expr& value) {
  return substitute(e, [&](const Node& n) -> std::optional<Expr> {
    const auto* s = std::get_if<Symbol>(&n.value);
    if (s && s->name == name) return value;
    return std::nullopt;
  });
}

}  // namespace dtm
