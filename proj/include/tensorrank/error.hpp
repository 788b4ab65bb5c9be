#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tensorrank {

enum class ErrorCode {
  DivisionByZero,
  FieldMismatch,
  InvalidField,
  ParseError,
  ModeOutOfRange,
  ZeroTensor,
  NonCubical,
  NotSymmetric,
  SmallCharacteristic,
  SmallField,
  ShapeMismatch,
  DimensionMismatch,
  InvalidRank,
  VariableMismatch,
  BudgetExceeded,
  NotFinite,
  InvalidWitness,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::InvalidField: return "InvalidField";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ModeOutOfRange: return "ModeOutOfRange";
    case ErrorCode::ZeroTensor: return "ZeroTensor";
    case ErrorCode::NonCubical: return "NonCubical";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::SmallCharacteristic: return "SmallCharacteristic";
    case ErrorCode::SmallField: return "SmallField";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidRank: return "InvalidRank";
    case ErrorCode::VariableMismatch: return "VariableMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotFinite: return "NotFinite";
    case ErrorCode::InvalidWitness: return "InvalidWitness";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's diagnostic stream) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tensorrank
