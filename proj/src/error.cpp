#include "rank1/error.hpp"

namespace rank1 {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::GapViolation: return "GapViolation";
    case ErrorKind::NonMonotone: return "NonMonotone";
    case ErrorKind::NonReal: return "NonReal";
    case ErrorKind::IndexMismatch: return "IndexMismatch";
    case ErrorKind::NonSummable: return "NonSummable";
    case ErrorKind::DegenerateIndex: return "DegenerateIndex";
    case ErrorKind::PoleHit: return "PoleHit";
    case ErrorKind::IndexNotInI1: return "IndexNotInI1";
    case ErrorKind::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorKind::ContourThroughSingularity: return "ContourThroughSingularity";
    case ErrorKind::CertificationFailed: return "CertificationFailed";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::CountMismatch: return "CountMismatch";
    case ErrorKind::WindowExceeded: return "WindowExceeded";
    case ErrorKind::DimensionCap: return "DimensionCap";
    case ErrorKind::SolverFailure: return "SolverFailure";
    case ErrorKind::CardinalityMismatch: return "CardinalityMismatch";
    case ErrorKind::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorKind::ZeroCoefficientObstruction: return "ZeroCoefficientObstruction";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownField: return "UnknownField";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

SpectralError::SpectralError(ErrorKind kind, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

void fail(ErrorKind kind, const std::string& detail) { throw SpectralError(kind, detail); }

}  // namespace rank1
