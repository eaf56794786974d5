#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairpack {

enum class ErrorCode {
  // Input problems: malformed files or matrices that leave the problem ill-posed.
  ParseError,
  IoError,
  EmptyColumn,
  NegativeEntry,
  InfeasiblePrimal,
  DegenerateDual,
  // Parameter problems.
  BadParam,
  EpsOutOfRange,
  NonPositiveConstraint,
  ScaleTooLarge,
  // Iteration budgets.
  IterCapExceeded,
  RoundsCapExceeded,
  BisectionStall,
  // Internal consistency failures.
  NonPositiveWeight,
  ProxyGateFailed,
  NotConverged,
  LocalityViolation,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Process exit codes used by the command-line tool.
// 0 ok, 2 input error, 3 parameter error, 4 iteration-cap error, 1 otherwise.
int exit_code_for(ErrorCode code);

}  // namespace fairpack
