#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <regex>

#include "dtm/evaluate.hpp"
#include "dtm/parse.hpp"
#include "dtm/problem.hpp"
#include "dtm/reference.hpp"
#include "dtm/symbolic.hpp"
#include "tables.hpp"

#ifndef DTM_DEFAULT_CORPUS
#define DTM_DEFAULT_CORPUS "corpus"
#endif

namespace dtm::cli {

namespace {

std::string fmt(const char* spec, double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string exact17(double v) { return fmt("%.17g", v); }

double constant(const std::string& text) { return eval_numeric(parse(text), {}); }

std::string csv_header(bool with_unknown, bool with_order) {
  std::string h;
  if (with_unknown) h += "unknown,";
  if (with_order) h += "N,";
  return h + "t,approx,reference,abs_error\n";
}

std::string csv_row(const ErrorRow& r) {
  return fmt("%.9e", r.t) + "," + fmt("%.9e", r.approx) + "," + fmt("%.9e", r.reference) + "," +
         fmt("%.9e", r.abs_error) + "\n";
}

// Writes to `path`, or to `out` when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file_atomically(path, text);
  }
}

struct TransformArgs {
  std::string f;
  std::optional<double> t0;
  std::string seed;
  int n = 0;
  std::string method;
  std::vector<std::string> unknowns;
};

int cmd_transform(const TransformArgs& a, std::ostream& out) {
  ParseOptions opts;
  opts.unknowns = a.unknowns;
  opts.declare_on_use = true;
  const Expr f = parse(a.f, opts);

  std::vector<std::string> unknowns = a.unknowns;
  if (unknowns.empty()) {
    const auto names = unknown_names(f);
    unknowns.assign(names.begin(), names.end());
  }
  const std::string method = a.method.empty() ? (a.seed.empty() ? "t2" : "both") : a.method;
  const bool numeric = method != "t2";
  if (numeric && !a.t0) throw ValidationError("method " + method + " needs --t0");

  Seeds seeds = parse_seeds(a.seed, unknowns);
  if (numeric) {
    for (const auto& name : unknowns) {
      const auto have = seeds.count(name) ? seeds[name].size() : 0;
      if (have < static_cast<std::size_t>(a.n) + 1) {
        throw ValidationError("numeric transform to order " + std::to_string(a.n) + " needs " +
                              std::to_string(a.n + 1) + " seed values for '" + name + "', got " +
                              std::to_string(have));
      }
    }
  }

  if (method == "t1") {
    const auto v = dt_compose({f, *a.t0, seeds, a.n});
    for (std::size_t k = 0; k < v.size(); ++k) out << "F(" << k << ") = " << exact17(v[k]) << "\n";
    return kOk;
  }

  SymbolicTransform st = dt_recurrence(f, unknowns, a.n);
  for (std::size_t k = 0; k < st.terms.size(); ++k) {
    Expr term = st.terms[k];
    if (a.t0) term = simplify(substitute_symbol(term, "t0", Expr::number(*a.t0)));
    out << "F(" << k << ") = " << to_string(term, 15) << "\n";
  }
  if (method == "t2") return kOk;

  const auto cv = dt_cross_validate({f, *a.t0, seeds, a.n});
  out << "\nk,compose,recurrence\n";
  for (std::size_t k = 0; k < cv.composed.size(); ++k) {
    out << k << "," << exact17(cv.composed[k]) << "," << exact17(cv.recurrent[k]) << "\n";
  }
  out << "max discrepancy: " << fmt("%.3e", cv.max_discrepancy) << "\n";
  return kOk;
}

struct SolveArgs {
  std::string file;
  std::optional<int> order;
  std::string branch = "pos";
  std::string out;
};

ProblemSpec load_with_overrides(const SolveArgs& a) {
  ProblemSpec spec = load_problem_file(a.file);
  if (a.order) spec.order = *a.order;
  if (a.branch == "neg") spec = with_sqrt_branch(std::move(spec), true);
  return spec;
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const ProblemSpec spec = load_with_overrides(a);
  const SolutionSeries sol = solve(spec);
  out << "problem: " << spec.name << "\n";
  out << "order: " << spec.order << "\n";
  for (std::size_t j = 0; j < spec.unknowns.size(); ++j) {
    const Series& s = sol[spec.unknowns[j]];
    out << spec.unknowns[j] << ":\n";
    for (int i = 0; i <= s.order(); ++i) {
      out << "  " << coefficient_symbol(spec.unknowns, j, i) << " = "
          << exact17(s[static_cast<std::size_t>(i)]) << "\n";
    }
  }
  double worst = 0.0;
  for (double r : sol.max_residual) worst = std::max(worst, r);
  out << "max residual: " << fmt("%.3e", worst) << "\n";

  if (spec.exact.empty()) return kOk;
  const bool system = spec.exact.size() > 1;
  std::string csv = csv_header(system, false);
  for (const auto& name : spec.unknowns) {
    if (!spec.exact.count(name)) continue;
    for (const auto& r : error_table(spec, sol, name)) csv += (system ? name + "," : "") + csv_row(r);
  }
  if (a.out.empty()) out << "\n";
  emit(a.out, csv, out);
  return kOk;
}

struct ReferenceArgs {
  std::string file;
  std::optional<double> t_end;
  RefConfig cfg;
  std::string series;
  std::optional<int> order;
  std::string branch = "pos";
  std::string out;
};

int cmd_reference(const ReferenceArgs& a, std::ostream& out) {
  const ProblemSpec model = load_problem_file(a.file);
  double t_end = model.t0;
  if (a.t_end) {
    t_end = *a.t_end;
  } else if (!model.points.empty()) {
    t_end = *std::max_element(model.points.begin(), model.points.end());
  }
  const RefSolution ref = reference_for_problem(model, t_end, a.cfg);

  if (a.series.empty()) {
    std::string csv = "t";
    for (const auto& name : model.unknowns) csv += "," + name;
    csv += "\n";
    for (std::size_t p = 0; p < ref.points.size(); ++p) {
      csv += fmt("%.9e", ref.points[p]);
      for (double v : ref.samples[p]) csv += "," + fmt("%.9e", v);
      csv += "\n";
    }
    emit(a.out, csv, out);
  } else {
    // Series of another encoding measured against this reference.
    const ProblemSpec spec = load_with_overrides({a.series, a.order, a.branch, {}});
    const SolutionSeries sol = solve(spec);
    const bool system = spec.unknowns.size() > 1;
    std::string csv = csv_header(system, false);
    for (const auto& name : spec.unknowns) {
      const auto it = std::find(model.unknowns.begin(), model.unknowns.end(), name);
      if (it == model.unknowns.end()) {
        throw ValidationError("reference model has no unknown '" + name + "'");
      }
      const auto component = static_cast<std::size_t>(it - model.unknowns.begin());
      for (const auto& r : error_table(spec, sol, name, ref, component)) {
        csv += (system ? name + "," : "") + csv_row(r);
      }
    }
    emit(a.out, csv, out);
  }
  if (!a.out.empty()) {
    out << "accepted steps: " << ref.accepted_steps << ", rejected: " << ref.rejected_steps
        << ", max error estimate: " << fmt("%.3e", ref.max_error_estimate) << "\n";
  }
  return kOk;
}

struct TablesArgs {
  std::string corpus = DTM_DEFAULT_CORPUS;
  std::string out = ".";
};

int cmd_tables(const TablesArgs& a, std::ostream& out, std::ostream& err) {
  const std::filesystem::path corpus(a.corpus);
  const auto expected = load_expected(corpus / "paper_tables.csv");
  std::filesystem::create_directories(a.out);

  std::vector<int> tables;
  for (const auto& c : expected) {
    if (std::find(tables.begin(), tables.end(), c.table) == tables.end()) tables.push_back(c.table);
  }
  std::sort(tables.begin(), tables.end());

  int failures = 0;
  for (int table : tables) {
    const auto rows = compute_table(table, expected, corpus);
    std::string csv = csv_header(true, true);
    for (const auto& r : rows) csv += r.unknown + "," + std::to_string(r.order) + "," + csv_row(r.row);
    const auto path = std::filesystem::path(a.out) / ("tables" + std::to_string(table) + ".csv");
    write_file_atomically(path.string(), csv);

    std::vector<TableCell> cells;
    std::copy_if(expected.begin(), expected.end(), std::back_inserter(cells),
                 [&](const TableCell& c) { return c.table == table; });
    const auto checks = check_table(cells, rows);
    const auto passed = std::count_if(checks.begin(), checks.end(),
                                      [](const CellCheck& c) { return c.pass; });
    out << "table " << table << (is_blocking(table) ? "" : " (diagnostic)") << ": " << passed
        << "/" << checks.size() << " cells ok -> " << path.string() << "\n";
    for (const auto& c : checks) {
      if (c.pass) continue;
      out << "  " << (is_blocking(table) ? "FAIL" : "off ") << " " << c.cell.unknown
          << " N=" << c.cell.order << " t=" << c.cell.t << " expected "
          << fmt("%.4e", c.cell.expected) << " computed " << fmt("%.4e", c.computed) << " ("
          << c.rule << ")\n";
      if (is_blocking(table)) ++failures;
    }
  }
  if (failures > 0) {
    err << "ERROR:acceptance: " << failures << " table cell(s) outside tolerance\n";
    return kAcceptanceMismatch;
  }
  return kOk;
}

}  // namespace

int exit_code_for(const Error& e) noexcept {
  if (dynamic_cast<const SolveError*>(&e)) return kSolveError;
  if (dynamic_cast<const IoError*>(&e)) return kIoError;
  return kParseError;
}

Seeds parse_seeds(const std::string& text, const std::vector<std::string>& unknowns) {
  static const std::regex entry(R"(\s*Y(\d*)\((\d+)\)\s*=\s*(.+?)\s*)");
  Seeds out;
  std::map<std::string, std::map<int, double>> found;
  std::size_t start = 0;
  while (start < text.size()) {
    // Split on commas outside parentheses.
    std::size_t end = start;
    int depth = 0;
    while (end < text.size() && !(text[end] == ',' && depth == 0)) {
      if (text[end] == '(') ++depth;
      if (text[end] == ')') --depth;
      ++end;
    }
    const std::string item = text.substr(start, end - start);
    start = end + 1;
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::smatch m;
    if (!std::regex_match(item, m, entry)) throw ParseError("bad seed entry '" + item + "'", 0);
    std::size_t j = 0;
    if (m[1].length() > 0) {
      j = std::stoul(m[1].str());
      if (j == 0) throw ParseError("seed indices Yj start at 1: '" + item + "'", 0);
      --j;
    } else if (unknowns.size() > 1) {
      throw ParseError("seed '" + item + "' must name the unknown as Yj(i) for systems", 0);
    }
    if (j >= unknowns.size()) throw ValidationError("seed '" + item + "' has no matching unknown");
    found[unknowns[j]][std::stoi(m[2].str())] = constant(m[3].str());
  }
  for (const auto& [name, values] : found) {
    auto& v = out[name];
    for (const auto& [i, value] : values) {
      if (i != static_cast<int>(v.size())) {
        throw ValidationError("seed coefficients for '" + name + "' must be contiguous from 0; " +
                              "missing index " + std::to_string(v.size()));
      }
      v.push_back(value);
    }
  }
  return out;
}

std::string format_csv(const std::vector<ErrorRow>& rows) {
  std::string out = csv_header(false, false);
  for (const auto& r : rows) out += csv_row(r);
  return out;
}

void write_file_atomically(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + tmp.string());
    f << contents;
    if (!f.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot replace " + target.string());
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential transform series solutions for nonlinear ODEs and IDEs", "dtm"};
  app.require_subcommand(1);

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Transform F(0..n) of a nonlinearity f");
  transform->add_option("--f", ta.f, "Function of t and unknowns, e.g. ln(t+y)")->required();
  transform->add_option("--t0", ta.t0, "Expansion point (kept symbolic by t2 when omitted)");
  transform->add_option("--seed", ta.seed, "Coefficients, e.g. \"Y(0)=0,Y(1)=1\"");
  transform->add_option("--n", ta.n, "Highest order")->required()->check(CLI::Range(0, 64));
  transform->add_option("--method", ta.method,
                        "t1 composition, t2 symbolic recurrence, both (default: both with "
                        "seeds, t2 without)")
      ->check(CLI::IsMember({"t1", "t2", "both"}));
  transform->add_option("--unknown", ta.unknowns, "Unknown names in Yj order (default: sorted)");

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a problem file for its series");
  solve_cmd->add_option("file", sa.file, "Problem file")->required();
  solve_cmd->add_option("--order", sa.order, "Override N")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--branch", sa.branch, "sqrt branch")->check(CLI::IsMember({"pos", "neg"}));
  solve_cmd->add_option("--out,--csv", sa.out, "Write the error table CSV here");

  ReferenceArgs ra;
  auto* reference = app.add_subcommand("reference", "Dormand-Prince reference for a problem file");
  reference->add_option("file", ra.file, "Problem file of first-order form")->required();
  reference->add_option("--t-end", ra.t_end, "End of the span (default: last point)");
  reference->add_option("--atol", ra.cfg.atol)->check(CLI::PositiveNumber);
  reference->add_option("--rtol", ra.cfg.rtol)->check(CLI::PositiveNumber);
  reference->add_option("--series", ra.series, "Compare this problem's series against it");
  reference->add_option("--order", ra.order, "Override N of --series")->check(CLI::PositiveNumber);
  reference->add_option("--branch", ra.branch)->check(CLI::IsMember({"pos", "neg"}));
  reference->add_option("--out,--csv", ra.out, "Write the CSV here");

  TablesArgs tb;
  auto* tables = app.add_subcommand("tables", "Reproduce the bundled error tables");
  tables->add_option("--corpus", tb.corpus, "Corpus directory");
  tables->add_option("--out", tb.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "ERROR:usage: " << e.what() << "\n";
    return kParseError;
  }

  try {
    if (*transform) return cmd_transform(ta, out);
    if (*solve_cmd) return cmd_solve(sa, out);
    if (*reference) return cmd_reference(ra, out);
    if (*tables) return cmd_tables(tb, out, err);
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "ERROR:" << e.category() << ": " << msg << "\n";
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "ERROR:io: " << e.what() << "\n";
    return kIoError;
  }
  return kOk;
}

}  // namespace dtm::cli
