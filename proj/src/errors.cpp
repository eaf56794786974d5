#include "fairpack/errors.hpp"

namespace fairpack {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyColumn: return "EmptyColumn";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::InfeasiblePrimal: return "InfeasiblePrimal";
    case ErrorCode::DegenerateDual: return "DegenerateDual";
    case ErrorCode::BadParam: return "BadParam";
    case ErrorCode::EpsOutOfRange: return "EpsOutOfRange";
    case ErrorCode::NonPositiveConstraint: return "NonPositiveConstraint";
    case ErrorCode::ScaleTooLarge: return "ScaleTooLarge";
    case ErrorCode::IterCapExceeded: return "IterCapExceeded";
    case ErrorCode::RoundsCapExceeded: return "RoundsCapExceeded";
    case ErrorCode::BisectionStall: return "BisectionStall";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::ProxyGateFailed: return "ProxyGateFailed";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::LocalityViolation: return "LocalityViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code) {}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
    case ErrorCode::EmptyColumn:
    case ErrorCode::NegativeEntry:
    case ErrorCode::InfeasiblePrimal:
    case ErrorCode::DegenerateDual:
      return 2;
    case ErrorCode::BadParam:
    case ErrorCode::EpsOutOfRange:
    case ErrorCode::NonPositiveConstraint:
    case ErrorCode::ScaleTooLarge:
      return 3;
    case ErrorCode::IterCapExceeded:
    case ErrorCode::RoundsCapExceeded:
    case ErrorCode::BisectionStall:
      return 4;
    default:
      return 1;
  }
}

}  // namespace fairpack
