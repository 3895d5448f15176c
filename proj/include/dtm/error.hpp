#pragma once

#include <stdexcept>
#include <string>

namespace dtm {

/// Base for every error raised by the library. `category()` is the short,
/// stable tag the command-line tool prints after `ERROR:`.
class Error : public std::runtime_error {
 public:
  Error(std::string category, const std::string& what)
      : std::runtime_error(what), category_(std::move(category)), message_(what) {}

  const std::string& category() const noexcept { return category_; }
  const char* what() const noexcept override { return message_.c_str(); }

  /// Appends location context once; later calls are ignored so the innermost
  /// (most specific) context wins.
  void annotate(const std::string& context) {
    if (annotated_) return;
    message_ += context;
    annotated_ = true;
  }

 private:
  std::string category_;
  std::string message_;
  bool annotated_ = false;
};

// Series arithmetic
class MismatchError : public Error {
 public:
  explicit MismatchError(const std::string& what) : Error("mismatch", what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class DivisionBySingularSeries : public Error {
 public:
  explicit DivisionBySingularSeries(const std::string& what)
      : Error("singular_division", what) {}
};

class NonzeroBasePointScaling : public Error {
 public:
  explicit NonzeroBasePointScaling(const std::string& what)
      : Error("nonzero_base_scaling", what) {}
};

// Expressions
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error("parse", what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnsupportedNode : public Error {
 public:
  explicit UnsupportedNode(const std::string& what)
      : Error("unsupported", what) {}
};

class UnboundSymbol : public Error {
 public:
  explicit UnboundSymbol(const std::string& name)
      : Error("unbound", "unbound symbol '" + name + "'"), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// Transforms and problems
class NotAutonomous : public Error {
 public:
  explicit NotAutonomous(const std::string& what)
      : Error("not_autonomous", what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error("validation", what) {}
};

// Solver. All of these map to the "solve" exit status in the CLI.
class SolveError : public Error {
 public:
  SolveError(std::string category, const std::string& what)
      : Error(std::move(category), what) {}
};

class SingularStep : public SolveError {
 public:
  explicit SingularStep(const std::string& what)
      : SolveError("singular_step", what) {}
};

class NonlinearStep : public SolveError {
 public:
  explicit NonlinearStep(const std::string& what)
      : SolveError("nonlinear_step", what) {}
};

class InconsistentInit : public SolveError {
 public:
  explicit InconsistentInit(const std::string& what)
      : SolveError("inconsistent_init", what) {}
};

class ResidualError : public SolveError {
 public:
  explicit ResidualError(const std::string& what)
      : SolveError("residual", what) {}
};

// Reference integrator
class MaxStepsExceeded : public SolveError {
 public:
  explicit MaxStepsExceeded(const std::string& what)
      : SolveError("max_steps", what) {}
};

class StepUnderflow : public SolveError {
 public:
  explicit StepUnderflow(const std::string& what)
      : SolveError("step_underflow", what) {}
};

class OutOfSpan : public Error {
 public:
  explicit OutOfSpan(const std::string& what) : Error("out_of_span", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace dtm
