#include "tables.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dtm/error.hpp"
#include "dtm/problem.hpp"
#include "dtm/reference.hpp"

namespace dtm::cli {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

std::vector<TableCell> load_expected(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw IoError("cannot read " + csv.string());
  std::vector<TableCell> cells;
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 6) {
      throw ValidationError(csv.filename().string() + " line " + std::to_string(lineno) +
                            ": expected 6 fields");
    }
    try {
      cells.push_back({std::stoi(f[0]), f[1], f[2], std::stoi(f[3]), std::stod(f[4]),
                       std::stod(f[5])});
    } catch (const std::logic_error&) {
      throw ValidationError(csv.filename().string() + " line " + std::to_string(lineno) +
                            ": bad number");
    }
  }
  return cells;
}

std::vector<TableRow> compute_table(int table, const std::vector<TableCell>& expected,
                                    const std::filesystem::path& corpus) {
  std::string problem;
  std::vector<std::string> unknowns;
  for (const auto& c : expected) {
    if (c.table != table) continue;
    problem = c.problem;
    if (std::find(unknowns.begin(), unknowns.end(), c.unknown) == unknowns.end()) {
      unknowns.push_back(c.unknown);
    }
  }
  if (problem.empty()) throw ValidationError("no expected cells for table " + std::to_string(table));

  ProblemSpec base = load_problem_file(corpus / problem);
  std::optional<ProblemSpec> literal;
  std::optional<RefSolution> ref;
  if (table == 3) {
    literal = load_problem_file(corpus / "ex2_literal.dtm");
    const double t_end = *std::max_element(base.points.begin(), base.points.end());
    ref = reference_for_problem(*literal, t_end);
  }

  std::vector<TableRow> rows;
  for (const auto& name : unknowns) {
    for (int n : kTableOrders) {
      ProblemSpec spec = base;
      spec.order = n;
      const SolutionSeries sol = solve(spec);
      const auto table_rows =
          ref ? error_table(spec, sol, name, *ref,
                            static_cast<std::size_t>(
                                std::find(literal->unknowns.begin(), literal->unknowns.end(), name) -
                                literal->unknowns.begin()))
              : error_table(spec, sol, name);
      for (const auto& r : table_rows) rows.push_back({name, n, r});
    }
  }
  return rows;
}

bool three_significant(double computed, double expected) {
  if (expected == 0.0) return computed == 0.0;
  const double unit = std::pow(10.0, std::floor(std::log10(std::abs(expected))) - 2.0);
  return std::abs(computed - expected) <= 0.5 * unit;
}

CellCheck check_cell(const TableCell& cell, double computed) {
  CellCheck out{cell, computed, false, {}};
  if (cell.table == 3) {
    out.rule = "factor 2";
    out.pass = cell.expected == 0.0
                   ? computed == 0.0
                   : computed >= 0.5 * cell.expected && computed <= 2.0 * cell.expected;
  } else if (cell.expected == 0.0) {
    out.rule = "exact zero";
    out.pass = computed == 0.0;
  } else if (cell.order == 15 && cell.expected <= 1e-13) {
    out.rule = "|e| <= 5e-13";
    out.pass = std::abs(computed) <= 5e-13;
  } else {
    out.rule = "3 sig figs";
    out.pass = three_significant(computed, cell.expected);
  }
  return out;
}

std::vector<CellCheck> check_table(const std::vector<TableCell>& expected,
                                   const std::vector<TableRow>& rows) {
  std::vector<CellCheck> out;
  for (const auto& cell : expected) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const TableRow& r) {
      return r.unknown == cell.unknown && r.order == cell.order &&
             std::abs(r.row.t - cell.t) <= 1e-12 * std::max(1.0, std::abs(cell.t));
    });
    if (it == rows.end()) {
      out.push_back({cell, std::nan(""), false, "missing row"});
      continue;
    }
    out.push_back(check_cell(cell, it->row.abs_error));
  }
  return out;
}

}  // namespace dtm::cli
