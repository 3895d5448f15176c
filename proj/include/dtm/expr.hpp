#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace dtm {

enum class UnaryOp { neg, exp, ln, sin, cos, tan, sec, asin, atan, sqrt_pos, sqrt_neg };
enum class BinaryOp { add, sub, mul, div, pow };

std::string_view to_string(UnaryOp op) noexcept;
std::string_view to_string(BinaryOp op) noexcept;

struct Node;

/// Immutable expression tree with shared subtrees.
///
/// One type serves problem definitions (Time, Unknown, Integral, Derivative
/// atoms) and symbolic transform formulas (Symbol atoms such as `t0` and
/// `Y(3)`). Copies are cheap: subtrees are reference counted and never
/// mutated, so an Expr is effectively a DAG once derivatives start sharing
/// nodes.
class Expr {
 public:
  static Expr number(double value);
  static Expr time();
  /// y(q t); q == 1 is the plain unknown.
  static Expr unknown(std::string name, double scale = 1.0);
  static Expr symbol(std::string name);
  static Expr unary(UnaryOp op, Expr arg);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  /// integral_{t0}^{t} body(tau) dtau; inside `body`, Time is tau.
  static Expr integral(Expr body);
  /// d^m/dt^m [y(q t)]. Only meaningful at the equation level of a problem.
  static Expr derivative(std::string name, int order, double scale = 1.0);

  const Node& node() const noexcept { return *node_; }
  /// Identity of the shared node, for memoised DAG traversals.
  const Node* id() const noexcept { return node_.get(); }

  std::optional<double> as_number() const noexcept;
  bool is_number(double v) const noexcept;

  template <class Visitor>
  decltype(auto) visit(Visitor&& vis) const;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Number { double value; };
struct Time {};
struct Unknown { std::string name; double scale = 1.0; };
struct Symbol { std::string name; };
struct Unary { UnaryOp op; Expr arg; };
struct Binary { BinaryOp op; Expr lhs; Expr rhs; };
struct Integral { Expr body; };
struct Derivative { std::string name; int order; double scale = 1.0; };

struct Node {
  std::variant<Number, Time, Unknown, Symbol, Unary, Binary, Integral, Derivative> value;
};

template <class Visitor>
decltype(auto) Expr::visit(Visitor&& vis) const {
  return std::visit(std::forward<Visitor>(vis), node_->value);
}

// Raw constructors: no folding. Use simplify() for that.
Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);

bool structurally_equal(const Expr& a, const Expr& b);

/// Text form accepted back by `parse` (given matching options).
/// `precision` is the number of significant digits used for numbers.
std::string to_string(const Expr& e, int precision = 17);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// True if any node (visited once per shared subtree) satisfies `pred`.
bool any_node(const Expr& e, const std::function<bool(const Node&)>& pred);

bool contains_time(const Expr& e);
bool contains_integral(const Expr& e);
bool contains_derivative(const Expr& e);
bool contains_unknown(const Expr& e);
bool contains_symbol(const Expr& e, std::string_view name);

std::set<std::string> symbol_names(const Expr& e);
/// Names of unknowns referenced directly or through derivative atoms.
std::set<std::string> unknown_names(const Expr& e);

/// Number of distinct shared nodes.
std::size_t dag_size(const Expr& e);

}  // namespace dtm
