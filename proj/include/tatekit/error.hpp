#pragma once

#include <stdexcept>
#include <string>

namespace tatekit {

enum class ErrorCode {
  InvalidArgument,
  NotInSubgroup,
  BadGroup,
  BadAction,
  SubgroupMismatch,
  ZeroInput,
  BadResidue,
  OddDegree,
  WildEven,
  InvalidDescriptor,
  UnknownPlace,
  HypothesisFail,
  TooLarge,
  NoDominator,
  InvalidConfig,
  NoPigeonhole,
  TransferNonzero,
  BoundViolated,
  ParseError,
  SchemaError,
};

inline const char* code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::NotInSubgroup: return "NOT_IN_SUBGROUP";
    case ErrorCode::BadGroup: return "BAD_GROUP";
    case ErrorCode::BadAction: return "BAD_ACTION";
    case ErrorCode::SubgroupMismatch: return "SUBGROUP_MISMATCH";
    case ErrorCode::ZeroInput: return "ZERO_INPUT";
    case ErrorCode::BadResidue: return "BAD_RESIDUE";
    case ErrorCode::OddDegree: return "ODD_DEGREE";
    case ErrorCode::WildEven: return "WILD_EVEN";
    case ErrorCode::InvalidDescriptor: return "INVALID_DESCRIPTOR";
    case ErrorCode::UnknownPlace: return "UNKNOWN_PLACE";
    case ErrorCode::HypothesisFail: return "HYPOTHESIS_FAIL";
    case ErrorCode::TooLarge: return "TOO_LARGE";
    case ErrorCode::NoDominator: return "NO_DOMINATOR";
    case ErrorCode::InvalidConfig: return "INVALID_CONFIG";
    case ErrorCode::NoPigeonhole: return "NO_PIGEONHOLE";
    case ErrorCode::TransferNonzero: return "TRANSFER_NONZERO";
    case ErrorCode::BoundViolated: return "BOUND_VIOLATED";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::SchemaError: return "SCHEMA_ERROR";
  }
  return "UNKNOWN";
}

// Errors whose occurrence contradicts a proven statement rather than
// signalling bad input.
inline bool is_theorem_violation(ErrorCode code) {
  return code == ErrorCode::TransferNonzero || code == ErrorCode::BoundViolated ||
         code == ErrorCode::NoPigeonhole;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(code_name(code)) + ": " + message), code_(code), message_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace tatekit
