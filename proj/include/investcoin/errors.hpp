#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace investcoin {

enum class ErrorCode {
  kParameterConflict,
  kSearchExhausted,
  kMalformedAggregate,
  kSumOutOfBound,
  kWitnessMismatch,
  kOutOfRange,
  kEmptyNetwork,
  kAmountOutOfRange,
  kConsistencyAbort,
  kMissingCipher,
  kZeroSlotViolation,
  kReturnFactorOutOfRange,
  kTransferMismatch,
  kRangeRecheckFailed,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All protocol-level failures surface as this exception; callers that need to
// keep going (the simulation harness) catch it and record the code.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public ProtocolError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : ProtocolError(ErrorCode::kParseError, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParameterConflict: return "ParameterConflict";
    case ErrorCode::kSearchExhausted: return "SearchExhausted";
    case ErrorCode::kMalformedAggregate: return "MalformedAggregate";
    case ErrorCode::kSumOutOfBound: return "SumOutOfBound";
    case ErrorCode::kWitnessMismatch: return "WitnessMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEmptyNetwork: return "EmptyNetwork";
    case ErrorCode::kAmountOutOfRange: return "AmountOutOfRange";
    case ErrorCode::kConsistencyAbort: return "ConsistencyAbort";
    case ErrorCode::kMissingCipher: return "MissingCipher";
    case ErrorCode::kZeroSlotViolation: return "ZeroSlotViolation";
    case ErrorCode::kReturnFactorOutOfRange: return "ReturnFactorOutOfRange";
    case ErrorCode::kTransferMismatch: return "TransferMismatch";
    case ErrorCode::kRangeRecheckFailed: return "RangeRecheckFailed";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace investcoin
