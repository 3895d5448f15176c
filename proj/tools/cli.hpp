#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dtm/error.hpp"
#include "dtm/solver.hpp"
#include "dtm/transform.hpp"

namespace dtm::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 2,
  kSolveError = 3,
  kIoError = 4,
  kAcceptanceMismatch = 5,
};

int exit_code_for(const Error& e) noexcept;

/// "Y(0)=0,Y(1)=1/2" for one unknown, "Y1(0)=2,Y2(0)=1" for systems. Y_j
/// refers to unknowns[j-1]. Values may be constant expressions.
Seeds parse_seeds(const std::string& text, const std::vector<std::string>& unknowns);

/// One CSV line per row, "%.9e" fields, '\n' endings.
std::string format_csv(const std::vector<ErrorRow>& rows);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomically(const std::string& path, const std::string& contents);

/// Entry point of the `dtm` tool. Normal output goes to `out`; diagnostics
/// go to `err` as a single "ERROR:<category>: message" line.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dtm::cli
