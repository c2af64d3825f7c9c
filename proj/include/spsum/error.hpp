#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spsum {

enum class ErrorCode {
  InvalidMatrix,
  NotPsd,
  EmptyProblem,
  ExpOverflow,
  DimMismatch,
  NegativeWeight,
  InvalidArgument,
  BarrierViolated,
  ZeroDirection,
  PotentialTooLarge,
  StepNotFound,
  OracleInfeasible,
  EquivalenceBroken,
  TNotLargeEnough,
  InvalidCost,
  InvalidColoring,
  InfeasibleInput,
  InvalidSimplexPoint,
  InvalidFamily,
  ParseError,
  Timeout,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::EmptyProblem: return "EmptyProblem";
    case ErrorCode::ExpOverflow: return "ExpOverflow";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::BarrierViolated: return "BarrierViolated";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::PotentialTooLarge: return "PotentialTooLarge";
    case ErrorCode::StepNotFound: return "StepNotFound";
    case ErrorCode::OracleInfeasible: return "OracleInfeasible";
    case ErrorCode::EquivalenceBroken: return "EquivalenceBroken";
    case ErrorCode::TNotLargeEnough: return "TNotLargeEnough";
    case ErrorCode::InvalidCost: return "InvalidCost";
    case ErrorCode::InvalidColoring: return "InvalidColoring";
    case ErrorCode::InfeasibleInput: return "InfeasibleInput";
    case ErrorCode::InvalidSimplexPoint: return "InvalidSimplexPoint";
    case ErrorCode::InvalidFamily: return "InvalidFamily";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Timeout: return "Timeout";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the failure
/// class; `what()` carries the diagnostic payload.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace spsum
