#include "dtm/expr.hpp"

#include <cstdio>
#include <ostream>
#include <unordered_set>

namespace dtm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string format_number(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

// Binding strength used by the printer: higher binds tighter.
constexpr int kAddPrec = 1;
constexpr int kMulPrec = 2;
constexpr int kNegPrec = 3;
constexpr int kPowPrec = 4;
constexpr int kAtomPrec = 5;

int precedence(const Expr& e) {
  return e.visit(overloaded{
      [](const Number& n) { return n.value < 0 ? kNegPrec : kAtomPrec; },
      [](const Unary& u) { return u.op == UnaryOp::neg ? kNegPrec : kAtomPrec; },
      [](const Binary& b) {
        switch (b.op) {
          case BinaryOp::add:
          case BinaryOp::sub: return kAddPrec;
          case BinaryOp::mul:
          case BinaryOp::div: return kMulPrec;
          case BinaryOp::pow: return kPowPrec;
        }
        return kAtomPrec;
      },
      [](const auto&) { return kAtomPrec; },
  });
}

void print(std::string& out, const Expr& e, int precision);

void print_wrapped(std::string& out, const Expr& e, bool parens, int precision) {
  if (parens) out += '(';
  print(out, e, precision);
  if (parens) out += ')';
}

void print(std::string& out, const Expr& e, int precision) {
  e.visit(overloaded{
      [&](const Number& n) { out += format_number(n.value, precision); },
      [&](const Time&) { out += 't'; },
      [&](const Unknown& u) {
        out += u.name;
        if (u.scale != 1.0) {
          out += '(' + format_number(u.scale, precision) + "*t)";
        }
      },
      [&](const Symbol& s) { out += s.name; },
      [&](const Unary& u) {
        if (u.op == UnaryOp::neg) {
          out += '-';
          // "-2" would read back as the literal -2, not neg(2).
          const auto c = u.arg.as_number();
          const bool parens = (c && *c >= 0) || precedence(u.arg) < kNegPrec;
          print_wrapped(out, u.arg, parens, precision);
          return;
        }
        out += to_string(u.op);
        print_wrapped(out, u.arg, true, precision);
      },
      [&](const Binary& b) {
        int prec = precedence(e);
        if (b.op == BinaryOp::pow) {
          print_wrapped(out, b.lhs, precedence(b.lhs) <= kPowPrec, precision);
          out += '^';
          print_wrapped(out, b.rhs, precedence(b.rhs) < kNegPrec, precision);
          return;
        }
        print_wrapped(out, b.lhs, precedence(b.lhs) < prec, precision);
        switch (b.op) {
          case BinaryOp::add: out += " + "; break;
          case BinaryOp::sub: out += " - "; break;
          case BinaryOp::mul: out += '*'; break;
          case BinaryOp::div: out += '/'; break;
          case BinaryOp::pow: break;
        }
        print_wrapped(out, b.rhs, precedence(b.rhs) <= prec, precision);
      },
      [&](const Integral& i) {
        out += "integral(";
        print(out, i.body, precision);
        out += ')';
      },
      [&](const Derivative& d) {
        out += "diff(" + d.name + ", " + std::to_string(d.order);
        if (d.scale != 1.0) out += ", scale=" + format_number(d.scale, precision);
        out += ')';
      },
  });
}

}  // namespace

std::string_view to_string(UnaryOp op) noexcept {
  switch (op) {
    case UnaryOp::neg: return "-";
    case UnaryOp::exp: return "exp";
    case UnaryOp::ln: return "ln";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::tan: return "tan";
    case UnaryOp::sec: return "sec";
    case UnaryOp::asin: return "asin";
    case UnaryOp::atan: return "atan";
    case UnaryOp::sqrt_pos: return "sqrt";
    case UnaryOp::sqrt_neg: return "nsqrt";
  }
  return "?";
}

std::string_view to_string(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::mul: return "*";
    case BinaryOp::div: return "/";
    case BinaryOp::pow: return "^";
  }
  return "?";
}

Expr Expr::number(double value) {
  return Expr(std::make_shared<const Node>(Node{Number{value}}));
}
Expr Expr::time() { return Expr(std::make_shared<const Node>(Node{Time{}})); }
Expr Expr::unknown(std::string name, double scale) {
  return Expr(std::make_shared<const Node>(Node{Unknown{std::move(name), scale}}));
}
Expr Expr::symbol(std::string name) {
  return Expr(std::make_shared<const Node>(Node{Symbol{std::move(name)}}));
}
Expr Expr::unary(UnaryOp op, Expr arg) {
  return Expr(std::make_shared<const Node>(Node{Unary{op, std::move(arg)}}));
}
Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(Node{Binary{op, std::move(lhs), std::move(rhs)}}));
}
Expr Expr::integral(Expr body) {
  return Expr(std::make_shared<const Node>(Node{Integral{std::move(body)}}));
}
Expr Expr::derivative(std::string name, int order, double scale) {
  return Expr(std::make_shared<const Node>(Node{Derivative{std::move(name), order, scale}}));
}

std::optional<double> Expr::as_number() const noexcept {
  if (const auto* n = std::get_if<Number>(&node_->value)) return n->value;
  return std::nullopt;
}

bool Expr::is_number(double v) const noexcept {
  const auto n = as_number();
  return n && *n == v;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::unary(UnaryOp::neg, std::move(a)); }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.id() == b.id()) return true;
  const auto& va = a.node().value;
  const auto& vb = b.node().value;
  if (va.index() != vb.index()) return false;
  return std::visit(
      overloaded{
          [&](const Number& x) { return x.value == std::get<Number>(vb).value; },
          [&](const Time&) { return true; },
          [&](const Unknown& x) {
            const auto& y = std::get<Unknown>(vb);
            return x.name == y.name && x.scale == y.scale;
          },
          [&](const Symbol& x) { return x.name == std::get<Symbol>(vb).name; },
          [&](const Unary& x) {
            const auto& y = std::get<Unary>(vb);
            return x.op == y.op && structurally_equal(x.arg, y.arg);
          },
          [&](const Binary& x) {
            const auto& y = std::get<Binary>(vb);
            return x.op == y.op && structurally_equal(x.lhs, y.lhs) &&
                   structurally_equal(x.rhs, y.rhs);
          },
          [&](const Integral& x) { return structurally_equal(x.body, std::get<Integral>(vb).body); },
          [&](const Derivative& x) {
            const auto& y = std::get<Derivative>(vb);
            return x.name == y.name && x.order == y.order && x.scale == y.scale;
          },
      },
      va);
}

std::string to_string(const Expr& e, int precision) {
  std::string out;
  print(out, e, precision);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

bool any_node(const Expr& e, const std::function<bool(const Node&)>& pred) {
  std::unordered_set<const Node*> seen;
  std::function<bool(const Expr&)> walk = [&](const Expr& x) -> bool {
    if (!seen.insert(x.id()).second) return false;
    if (pred(x.node())) return true;
    return x.visit(overloaded{
        [&](const Unary& u) { return walk(u.arg); },
        [&](const Binary& b) { return walk(b.lhs) || walk(b.rhs); },
        [&](const Integral& i) { return walk(i.body); },
        [](const auto&) { return false; },
    });
  };
  return walk(e);
}

bool contains_time(const Expr& e) {
  return any_node(e, [](const Node& n) { return std::holds_alternative<Time>(n.value); });
}
bool contains_integral(const Expr& e) {
  return any_node(e, [](const Node& n) { return std::holds_alternative<Integral>(n.value); });
}
bool contains_derivative(const Expr& e) {
  return any_node(e, [](const Node& n) { return std::holds_alternative<Derivative>(n.value); });
}
bool contains_unknown(const Expr& e) {
  return any_node(e, [](const Node& n) { return std::holds_alternative<Unknown>(n.value); });
}
bool contains_symbol(const Expr& e, std::string_view name) {
  return any_node(e, [name](const Node& n) {
    const auto* s = std::get_if<Symbol>(&n.value);
    return s && s->name == name;
  });
}

std::set<std::string> symbol_names(const Expr& e) {
  std::set<std::string> out;
  any_node(e, [&](const Node& n) {
    if (const auto* s = std::get_if<Symbol>(&n.value)) out.insert(s->name);
    return false;
  });
  return out;
}

std::set<std::string> unknown_names(const Expr& e) {
  std::set<std::string> out;
  any_node(e, [&](const Node& n) {
    if (const auto* u = std::get_if<Unknown>(&n.value)) out.insert(u->name);
    if (const auto* d = std::get_if<Derivative>(&n.value)) out.insert(d->name);
    return false;
  });
  return out;
}

std::size_t dag_size(const Expr& e) {
  std::size_t count = 0;
  any_node(e, [&](const Node&) {
    ++count;
    return false;
  });
  return count;
}

}  // namespace dtm
