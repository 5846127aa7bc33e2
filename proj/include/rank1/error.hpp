#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rank1 {

enum class ErrorKind {
  GapViolation,
  NonMonotone,
  NonReal,
  IndexMismatch,
  NonSummable,
  DegenerateIndex,
  PoleHit,
  IndexNotInI1,
  EpsOutOfRange,
  ContourThroughSingularity,
  CertificationFailed,
  NoConvergence,
  OrderMismatch,
  CountMismatch,
  WindowExceeded,
  DimensionCap,
  SolverFailure,
  CardinalityMismatch,
  BetaOutOfRange,
  ZeroCoefficientObstruction,
  ParseError,
  UnknownField,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind; what() starts with the
// kind name so command-line diagnostics can be matched textually.
class SpectralError : public std::runtime_error {
 public:
  SpectralError(ErrorKind kind, const std::string& detail);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& detail);

}  // namespace rank1
