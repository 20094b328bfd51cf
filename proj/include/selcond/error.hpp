#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace selcond {

enum class ErrorCode {
  // network-model
  SyntaxError,
  CycleDetected,
  UndeclaredParent,
  WrongRowCount,
  ProbabilityOutOfRange,
  DuplicateNode,
  UnknownNode,
  IncompleteAssignment,
  MissingParentBinding,
  ConflictingBinding,
  // exact-oracle
  NetworkTooLarge,
  OverlappingAssignments,
  // dirichlet-stopping
  CategoryOutOfRange,
  EmptyPosterior,
  InvalidSimplexPoint,
  UndefinedDensity,
  NonPositiveShape,
  NonPositivePhiMin,
  // simulation
  SampleBudgetExceeded,
  RejectionBudgetExceeded,
  // reformulation
  OverlappingSets,
  LengthMismatch,
  ZeroDenominator,
  // generic precondition failure
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure with the 1-based source line it was detected on (0 when the
/// error is not tied to one line, e.g. a cycle).
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, const std::string& what)
      : Error(code, line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace selcond
