#include "dtm/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "dtm/error.hpp"
#include "dtm/evaluate.hpp"
#include "dtm/symbolic.hpp"

namespace dtm {

namespace {

void require_plain_function(const Expr& f) {
  if (contains_integral(f)) {
    throw UnsupportedNode("transform of '" + to_string(f) +
                          "': integrals belong to the equation, not the nonlinearity");
  }
  if (contains_derivative(f)) {
    throw UnsupportedNode("transform of '" + to_string(f) + "': derivative atoms not allowed");
  }
}

std::size_t index_of(const std::vector<std::string>& unknowns, const std::string& name) {
  auto it = std::find(unknowns.begin(), unknowns.end(), name);
  if (it == unknowns.end()) {
    throw ValidationError("unknown '" + name + "' is not in the declared unknown list");
  }
  return static_cast<std::size_t>(it - unknowns.begin());
}

// One coefficient family per distinct y_j(q t) occurring in f.
struct Family {
  std::size_t unknown;
  double scale;
  std::string prefix;

  std::string symbol(const std::vector<std::string>& unknowns, int i) const {
    if (scale == 1.0) return coefficient_symbol(unknowns, unknown, i);
    return prefix + "(" + std::to_string(i) + ")";
  }
};

}  // namespace

std::vector<double> dt_compose(const TransformRequest& req) {
  require_plain_function(req.f);
  if (req.order < 0) throw ValidationError("transform order must be non-negative");
  const auto n = static_cast<std::size_t>(req.order);
  SeriesBinding binding;
  for (const auto& name : unknown_names(req.f)) {
    auto it = req.seeds.find(name);
    if (it == req.seeds.end()) {
      throw ValidationError("no seed coefficients for unknown '" + name + "'");
    }
    if (it->second.size() < n + 1) {
      throw ValidationError("unknown '" + name + "' needs " + std::to_string(n + 1) +
                            " seed coefficients, got " + std::to_string(it->second.size()));
    }
    std::vector<double> c(it->second.begin(), it->second.begin() + static_cast<long>(n + 1));
    binding.emplace(name, Series(req.t0, std::move(c)));
  }
  const Series s = eval_series(req.f, binding, req.t0, req.order);
  return {s.coeffs().begin(), s.coeffs().end()};
}

std::string coefficient_symbol(const std::vector<std::string>& unknowns, std::size_t j, int i) {
  std::string name = "Y";
  if (unknowns.size() > 1) name += std::to_string(j + 1);
  return name + "(" + std::to_string(i) + ")";
}

std::vector<double> SymbolicTransform::instantiate(double t0, const Seeds& seeds) const {
  NumericBinding b;
  b.values.emplace("t0", t0);
  for (std::size_t j = 0; j < unknowns.size(); ++j) {
    auto it = seeds.find(unknowns[j]);
    if (it == seeds.end()) continue;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      b.values.emplace(coefficient_symbol(unknowns, j, static_cast<int>(i)), it->second[i]);
    }
  }
  return eval_numeric(terms, b);
}

namespace {

// Families of coefficient symbols found in f, with F(0) = f(t0, Y_j(0)).
struct Setup {
  std::vector<Family> families;
  Expr f0;
};

Setup prepare(const Expr& f, const std::vector<std::string>& unknowns, int n) {
  require_plain_function(f);
  if (n < 0 || n > kMaxSymbolicOrder) {
    throw ValidationError("symbolic recurrence supports orders 0.." +
                          std::to_string(kMaxSymbolicOrder) + ", got " + std::to_string(n));
  }
  Setup setup{{}, f};
  auto& families = setup.families;
  auto family_of = [&](const Unknown& u) -> const Family& {
    const std::size_t j = index_of(unknowns, u.name);
    for (const auto& fam : families) {
      if (fam.unknown == j && fam.scale == u.scale) return fam;
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", u.scale);
    families.push_back({j, u.scale, "W" + std::to_string(j + 1) + "@" + buf});
    return families.back();
  };
  setup.f0 = substitute(f, [&](const Node& node) -> std::optional<Expr> {
    if (std::holds_alternative<Time>(node.value)) return Expr::symbol("t0");
    if (const auto* u = std::get_if<Unknown>(&node.value)) {
      return Expr::symbol(family_of(*u).symbol(unknowns, 0));
    }
    return std::nullopt;
  });
  return setup;
}

// y(q t) has coefficients q^i Y(i) about t0 = 0.
void unscale(SymbolicTransform& out, const std::vector<Family>& families) {
  const bool scaled = std::any_of(families.begin(), families.end(),
                                  [](const Family& fam) { return fam.scale != 1.0; });
  if (!scaled) return;
  for (auto& term : out.terms) {
    term = substitute(term, [&](const Node& node) -> std::optional<Expr> {
      const auto* s = std::get_if<Symbol>(&node.value);
      if (!s) return std::nullopt;
      if (s->name == "t0") return Expr::number(0.0);
      for (const auto& fam : families) {
        if (fam.scale == 1.0 || s->name.rfind(fam.prefix + "(", 0) != 0) continue;
        const int i = std::stoi(s->name.substr(fam.prefix.size() + 1));
        return sym::mul(Expr::number(std::pow(fam.scale, i)),
                        Expr::symbol(coefficient_symbol(out.unknowns, fam.unknown, i)));
      }
      return std::nullopt;
    });
  }
}

// F(n) kept as sum_terms c * D[alpha] * prod_{j, i>=1} Y_j(i)^e, where
// D[alpha] = d^a/dt0^a prod_j d^(b_j)/dY_j(0)^(b_j) F(0). A term key is
// [a, b_0..b_{J-1}, e_{0,1..n}, e_{1,1..n}, ...].
class StructuredRecurrence {
 public:
  StructuredRecurrence(const Setup& setup, const std::vector<std::string>& unknowns, int n)
      : setup_(setup), unknowns_(unknowns), n_(n), families_(setup.families.size()) {}

  std::vector<Expr> run() {
    std::map<std::vector<int>, double> current;
    current.emplace(std::vector<int>(key_size(), 0), 1.0);
    std::vector<Expr> terms{to_expr(current)};
    for (int k = 1; k <= n_; ++k) {
      std::map<std::vector<int>, double> next;
      const double inv = 1.0 / k;
      for (const auto& [key, c] : current) {
        // d/dt0 acts on D only.
        add(next, bump(key, 0, 1), c * inv);
        for (std::size_t j = 0; j < families_; ++j) {
          // (0+1) Y_j(1) d/dY_j(0): D only, since monomials hold i >= 1.
          auto with_d = bump(key, 1 + j, 1);
          with_d[exp_slot(j, 1)] += 1;
          add(next, std::move(with_d), c * inv);
          // (i+1) Y_j(i+1) d/dY_j(i) on the monomial.
          for (int i = 1; i < k; ++i) {
            const int e = key[exp_slot(j, i)];
            if (e == 0) continue;
            auto moved = key;
            moved[exp_slot(j, i)] -= 1;
            moved[exp_slot(j, i + 1)] += 1;
            add(next, std::move(moved), c * e * (i + 1) * inv);
          }
        }
      }
      current = std::move(next);
      terms.push_back(to_expr(current));
    }
    return terms;
  }

 private:
  std::size_t key_size() const { return 1 + families_ + families_ * static_cast<std::size_t>(n_); }
  std::size_t exp_slot(std::size_t j, int i) const {
    return 1 + families_ + j * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i - 1);
  }
  static std::vector<int> bump(const std::vector<int>& key, std::size_t slot, int by) {
    auto out = key;
    out[slot] += by;
    return out;
  }

  void add(std::map<std::vector<int>, double>& into, std::vector<int> key, double c) {
    if (c == 0.0 || derivative(key).is_number(0.0)) return;
    into[std::move(key)] += c;
  }

  const Expr& derivative(const std::vector<int>& key) {
    std::vector<int> alpha(key.begin(), key.begin() + static_cast<long>(1 + families_));
    if (auto it = d_.find(alpha); it != d_.end()) return it->second;
    Expr value = setup_.f0;
    const auto slot = std::find_if(alpha.begin(), alpha.end(), [](int v) { return v > 0; });
    if (slot != alpha.end()) {
      auto prev = alpha;
      prev[static_cast<std::size_t>(slot - alpha.begin())] -= 1;
      prev.resize(key.size(), 0);
      const auto pos = static_cast<std::size_t>(slot - alpha.begin());
      const std::string var =
          pos == 0 ? "t0" : setup_.families[pos - 1].symbol(unknowns_, 0);
      value = diff_sym(derivative(prev), var);
    }
    return d_.emplace(std::move(alpha), std::move(value)).first->second;
  }

  Expr to_expr(const std::map<std::vector<int>, double>& terms) {
    Expr sum = Expr::number(0.0);
    for (const auto& [key, c] : terms) {
      if (c == 0.0) continue;
      Expr monomial = Expr::number(c);
      for (std::size_t j = 0; j < families_; ++j) {
        for (int i = 1; i <= n_; ++i) {
          const int e = key[exp_slot(j, i)];
          if (e == 0) continue;
          const Expr y = Expr::symbol(setup_.families[j].symbol(unknowns_, i));
          monomial = sym::mul(monomial, sym::pow(y, e));
        }
      }
      sum = sym::add(sum, sym::mul(monomial, derivative(key)));
    }
    return simplify(sum);
  }

  const Setup& setup_;
  const std::vector<std::string>& unknowns_;
  int n_;
  std::size_t families_;
  std::map<std::vector<int>, Expr> d_;
};

}  // namespace

SymbolicTransform dt_recurrence(const Expr& f, const std::vector<std::string>& unknowns, int n) {
  const Setup setup = prepare(f, unknowns, n);
  SymbolicTransform out;
  out.unknowns = unknowns;
  out.terms = StructuredRecurrence(setup, unknowns, n).run();
  unscale(out, setup.families);
  return out;
}

SymbolicTransform dt_recurrence_direct(const Expr& f, const std::vector<std::string>& unknowns,
                                       int n) {
  const Setup setup = prepare(f, unknowns, n);
  SymbolicTransform out;
  out.unknowns = unknowns;
  Expr current = setup.f0;
  out.terms.push_back(current);
  for (int k = 1; k <= n; ++k) {
    const auto present = symbol_names(current);
    Expr acc = Expr::number(0.0);
    if (present.count("t0")) acc = diff_sym(current, "t0");
    for (const auto& fam : setup.families) {
      for (int i = 0; i < k; ++i) {
        const std::string yi = fam.symbol(unknowns, i);
        if (!present.count(yi)) continue;
        const Expr partial = diff_sym(current, yi);
        const Expr next = Expr::symbol(fam.symbol(unknowns, i + 1));
        acc = sym::add(acc, sym::mul(sym::mul(Expr::number(i + 1.0), next), partial));
      }
    }
    current = simplify(sym::div(acc, Expr::number(k)));
    out.terms.push_back(current);
  }
  unscale(out, setup.families);
  return out;
}

SymbolicTransform dt_autonomous(const Expr& f, const std::vector<std::string>& unknowns, int n) {
  if (contains_time(f)) {
    throw NotAutonomous("'" + to_string(f) + "' depends explicitly on t");
  }
  SymbolicTransform out = dt_recurrence(f, unknowns, n);
  for (const auto& term : out.terms) {
    if (contains_symbol(term, "t0")) {
      throw std::logic_error("autonomous transform still depends on t0: " + to_string(term));
    }
  }
  return out;
}

CrossValidation dt_cross_validate(const TransformRequest& req) {
  std::vector<std::string> unknowns;
  for (const auto& name : unknown_names(req.f)) unknowns.push_back(name);
  CrossValidation cv;
  cv.composed = dt_compose(req);
  cv.recurrent = dt_recurrence(req.f, unknowns, req.order).instantiate(req.t0, req.seeds);
  for (std::size_t k = 0; k < cv.composed.size(); ++k) {
    const double a = cv.composed[k];
    const double b = cv.recurrent[k];
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    cv.max_discrepancy = std::max(cv.max_discrepancy, std::abs(a - b) / scale);
  }
  return cv;
}

}  // namespace dtm
