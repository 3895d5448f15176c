#include "dtm/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

#include "dtm/error.hpp"
#include "dtm/symbolic.hpp"

namespace dtm {

namespace {

struct FuncName {
  std::string_view name;
  UnaryOp op;
};

constexpr FuncName kFunctions[] = {
    {"exp", UnaryOp::exp},   {"ln", UnaryOp::ln},       {"sin", UnaryOp::sin},
    {"cos", UnaryOp::cos},   {"tan", UnaryOp::tan},     {"sec", UnaryOp::sec},
    {"asin", UnaryOp::asin}, {"atan", UnaryOp::atan},   {"sqrt", UnaryOp::sqrt_pos},
    {"nsqrt", UnaryOp::sqrt_neg},
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options) : text_(text), opts_(options) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("expected end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    std::string near;
    if (pos_ < text_.size()) {
      near = " near '" + std::string(text_.substr(pos_, 12)) + "'";
    }
    throw ParseError(message + near, pos_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool at_number() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) ||
           (c == '.' && pos_ + 1 < text_.size() &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])));
  }

  double number() {
    skip_ws();
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) fail("expected an identifier");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  int integer() {
    const std::size_t at = pos_;
    const double v = number();
    if (v != std::floor(v) || v < 0 || v > 1e6) {
      pos_ = at;
      fail("expected a non-negative integer");
    }
    return static_cast<int>(v);
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (accept('+')) {
        e = e + parse_term();
      } else if (accept('-')) {
        e = e - parse_term();
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (accept('*')) {
        e = e * parse_unary();
      } else if (accept('/')) {
        e = e / parse_unary();
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) {
      if (at_number()) {
        const std::size_t save = pos_;
        const double v = number();
        if (peek() != '^') return Expr::number(-v);
        pos_ = save;
      }
      return -parse_unary();
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (!accept('^')) return base;
    const std::size_t at = pos_;
    Expr exponent = simplify(parse_unary());
    if (!exponent.as_number()) {
      pos_ = at;
      fail("exponent must be a constant");
    }
    return Expr::binary(BinaryOp::pow, std::move(base), std::move(exponent));
  }

  double constant_expr() {
    const std::size_t at = pos_;
    Expr e = simplify(parse_expr());
    const auto v = e.as_number();
    if (!v) {
      pos_ = at;
      fail("expected a constant");
    }
    return *v;
  }

  bool is_unknown(const std::string& name) const {
    return opts_.declare_on_use ||
           std::find(opts_.unknowns.begin(), opts_.unknowns.end(), name) != opts_.unknowns.end();
  }

  static bool is_coefficient_symbol(const std::string& name) {
    return name[0] == 'Y' &&
           std::all_of(name.begin() + 1, name.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
  }

  Expr parse_atom() {
    if (at_number()) return Expr::number(number());
    if (accept('(')) {
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    const std::size_t at = (skip_ws(), pos_);
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (!is_ident_start(text_[pos_])) fail("expected a number, identifier or '('");
    const std::string name = ident();

    if (name == "t") return Expr::time();
    if (opts_.allow_symbols && name == "t0") return Expr::symbol("t0");
    if (name == "integral") {
      expect('(');
      Expr body = parse_expr();
      expect(')');
      return Expr::integral(std::move(body));
    }
    for (const auto& f : kFunctions) {
      if (name == f.name) {
        expect('(');
        Expr arg = parse_expr();
        expect(')');
        return Expr::unary(f.op, std::move(arg));
      }
    }
    if (name == "diff") {
      if (!opts_.allow_derivatives) {
        pos_ = at;
        fail("derivative atoms are only allowed in equations");
      }
      return parse_derivative();
    }
    if (opts_.allow_symbols && is_coefficient_symbol(name) && peek() == '(') {
      expect('(');
      const int index = integer();
      expect(')');
      return Expr::symbol(name + "(" + std::to_string(index) + ")");
    }
    if (!is_unknown(name)) {
      pos_ = at;
      fail("undeclared identifier '" + name + "'");
    }
    if (!accept('(')) return Expr::unknown(name);
    double scale = 1.0;
    if (at_number()) {
      scale = number();
      expect('*');
    }
    skip_ws();
    if (ident() != "t") fail("expected 't' in scaled argument");
    expect(')');
    if (scale == 0.0) fail("argument scale must be nonzero");
    return Expr::unknown(name, scale);
  }

  Expr parse_derivative() {
    expect('(');
    const std::size_t at = (skip_ws(), pos_);
    const std::string name = ident();
    if (!is_unknown(name)) {
      pos_ = at;
      fail("undeclared identifier '" + name + "'");
    }
    expect(',');
    skip_ws();
    const int order = integer();
    if (order < 1) fail("derivative order must be at least 1");
    double scale = 1.0;
    if (accept(',')) {
      if (ident() != "scale") fail("expected 'scale='");
      expect('=');
      scale = constant_expr();
      if (scale == 0.0) fail("derivative scale must be nonzero");
    }
    expect(')');
    return Expr::derivative(name, order, scale);
  }

  std::string_view text_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseOptions& options) {
  return Parser(text, options).run();
}

}  // namespace dtm
