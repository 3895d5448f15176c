#include "dtm/evaluate.hpp"

#include <cmath>
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

class NumericEvaluator {
 public:
  explicit NumericEvaluator(const NumericBinding& b) : b_(b) {}

  double operator()(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    const double v = e.visit(overloaded{
        [](const Number& n) { return n.value; },
        [&](const Time&) {
          if (!b_.t) throw UnboundSymbol("t");
          return *b_.t;
        },
        [&](const Unknown& u) {
          if (u.scale != 1.0) {
            throw UnsupportedNode("numeric evaluation of scaled unknown '" + u.name + "'");
          }
          return lookup(u.name);
        },
        [&](const Symbol& s) { return lookup(s.name); },
        [&](const Unary& u) {
          const double x = (*this)(u.arg);
          if (auto r = detail::apply_unary(u.op, x)) return *r;
          throw DomainError(std::string(to_string(u.op)) + " is undefined at " +
                            std::to_string(x) + " in '" + to_string(e) + "'");
        },
        [&](const Binary& bin) {
          const double x = (*this)(bin.lhs);
          const double y = (*this)(bin.rhs);
          if (auto r = detail::apply_binary(bin.op, x, y)) return *r;
          throw DomainError(std::string(to_string(bin.op)) + " is undefined for (" +
                            std::to_string(x) + ", " + std::to_string(y) + ")");
        },
        [](const Integral&) -> double {
          throw UnsupportedNode("integrals have no pointwise numeric value");
        },
        [](const Derivative& d) -> double {
          throw UnsupportedNode("derivative atom diff(" + d.name + ") has no numeric value");
        },
    });
    memo_.emplace(e.id(), v);
    return v;
  }

 private:
  double lookup(const std::string& name) const {
    auto it = b_.values.find(name);
    if (it == b_.values.end()) throw UnboundSymbol(name);
    return it->second;
  }

  const NumericBinding& b_;
  std::unordered_map<const Node*, double> memo_;
};

Elementary as_elementary(UnaryOp op) {
  switch (op) {
    case UnaryOp::exp: return Elementary::exp;
    case UnaryOp::ln: return Elementary::ln;
    case UnaryOp::sin: return Elementary::sin;
    case UnaryOp::cos: return Elementary::cos;
    case UnaryOp::tan: return Elementary::tan;
    case UnaryOp::asin: return Elementary::asin;
    case UnaryOp::atan: return Elementary::atan;
    case UnaryOp::sqrt_pos: return Elementary::sqrt_pos;
    case UnaryOp::sqrt_neg: return Elementary::sqrt_neg;
    case UnaryOp::neg:
    case UnaryOp::sec: break;
  }
  throw DomainError("not an elementary series function");
}

class SeriesEvaluator {
 public:
  SeriesEvaluator(const SeriesBinding& b, double t0, int order)
      : b_(b), t0_(t0), order_(order) {
    for (const auto& [name, s] : b_) {
      if (s.order() != order || s.base_point() != t0) {
        throw MismatchError("series bound to '" + name + "' has order " +
                            std::to_string(s.order()) + " at base " +
                            std::to_string(s.base_point()) + ", expected order " +
                            std::to_string(order) + " at base " + std::to_string(t0));
      }
    }
  }

  Series operator()(const Expr& e) {
    if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
    Series s = e.visit(overloaded{
        [&](const Number& n) { return Series::constant(n.value, t0_, order_); },
        [&](const Time&) {
          // With order 0 only the value t0 survives.
          if (order_ == 0) return Series::constant(t0_, t0_, 0);
          return Series::time_var(t0_, order_);
        },
        [&](const Unknown& u) {
          const Series& y = lookup(u.name);
          if (u.scale == 1.0) return y;
          return guarded(e, [&] { return rescale_argument(y, u.scale); });
        },
        [&](const Symbol& s) -> Series {
          throw UnboundSymbol(s.name);
        },
        [&](const Unary& u) {
          Series x = (*this)(u.arg);
          return guarded(e, [&] {
            switch (u.op) {
              case UnaryOp::neg: return -x;
              case UnaryOp::sec: return Series::constant(1.0, t0_, order_) / cos(x);
              default: return elementary(as_elementary(u.op), x);
            }
          });
        },
        [&](const Binary& b) {
          Series x = (*this)(b.lhs);
          if (b.op == BinaryOp::pow) {
            const auto p = b.rhs.as_number();
            if (!p) throw UnsupportedNode("exponent must be a number in '" + to_string(e) + "'");
            return guarded(e, [&] { return pow(x, *p); });
          }
          Series y = (*this)(b.rhs);
          return guarded(e, [&] {
            switch (b.op) {
              case BinaryOp::add: return x + y;
              case BinaryOp::sub: return x - y;
              case BinaryOp::mul: return x * y;
              case BinaryOp::div: return x / y;
              case BinaryOp::pow: break;
            }
            return x;
          });
        },
        [&](const Integral& i) { return integrate((*this)(i.body)); },
        [&](const Derivative& d) {
          const Series& y = lookup(d.name);
          return guarded(e, [&] {
            Series r = differentiate(y, d.order);
            if (d.scale == 1.0) return r;
            // d^m/dt^m y(q t) has coefficients (i+m)!/i! q^(i+m) Y(i+m).
            return std::pow(d.scale, d.order) * rescale_argument(r, d.scale);
          });
        },
    });
    memo_.emplace(e.id(), s);
    return s;
  }

 private:
  template <class F>
  Series guarded(const Expr& e, F&& f) {
    try {
      return f();
    } catch (Error& err) {
      err.annotate(" in '" + to_string(e) + "'");
      throw;
    }
  }

  const Series& lookup(const std::string& name) const {
    auto it = b_.find(name);
    if (it == b_.end()) throw UnboundSymbol(name);
    return it->second;
  }

  const SeriesBinding& b_;
  double t0_;
  int order_;
  std::unordered_map<const Node*, Series> memo_;
};

}  // namespace

double eval_numeric(const Expr& e, const NumericBinding& binding) {
  return NumericEvaluator(binding)(e);
}

std::vector<double> eval_numeric(const std::vector<Expr>& es, const NumericBinding& binding) {
  NumericEvaluator eval(binding);
  std::vector<double> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(eval(e));
  return out;
}

Series eval_series(const Expr& e, const SeriesBinding& binding, double t0, int order) {
  return SeriesEvaluator(binding, t0, order)(e);
}

}  // namespace dtm
