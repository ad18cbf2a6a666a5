#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapn {

enum class ErrorCode {
  NotPrime,
  NotIrreducible,
  OrderTooLarge,
  DivisionByZero,
  BothZero,
  RootIsZero,
  FactorizationTooLarge,
  ZeroDirection,
  WrongWeight,
  NotNormalized,
  ExponentOutOfRange,
  EvenCharacteristic,
  CacheCorrupt,
  BudgetExceeded,
  InvalidArgument,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::BothZero: return "BothZero";
    case ErrorCode::RootIsZero: return "RootIsZero";
    case ErrorCode::FactorizationTooLarge: return "FactorizationTooLarge";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::WrongWeight: return "WrongWeight";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::EvenCharacteristic: return "EvenCharacteristic";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Domain error raised by every module of the library. The code is stable and
/// is what the CLI reports in its machine-readable error document.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gapn
