#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glevy {

enum class ErrorCode {
  EmptySet,
  NegativeRate,
  ZeroJump,
  NonFinite,
  DimensionMismatch,
  InvalidArgument,
  GridTooCoarse,
  CflUnsatisfiable,
  NonmonotoneDiffusion,
  NoSnapshot,
  LambdaOutOfRange,
  InvalidTolerance,
  Singular,
  DimensionOverflow,
  IndexOutOfRange,
  ParseError,
  ValidationError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySet: return "EMPTY_SET";
    case ErrorCode::NegativeRate: return "NEGATIVE_RATE";
    case ErrorCode::ZeroJump: return "ZERO_JUMP";
    case ErrorCode::NonFinite: return "NON_FINITE";
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::GridTooCoarse: return "GRID_TOO_COARSE";
    case ErrorCode::CflUnsatisfiable: return "CFL_UNSATISFIABLE";
    case ErrorCode::NonmonotoneDiffusion: return "NONMONOTONE_DIFFUSION";
    case ErrorCode::NoSnapshot: return "NO_SNAPSHOT";
    case ErrorCode::LambdaOutOfRange: return "LAMBDA_OUT_OF_RANGE";
    case ErrorCode::InvalidTolerance: return "INVALID_TOLERANCE";
    case ErrorCode::Singular: return "SINGULAR";
    case ErrorCode::DimensionOverflow: return "DIMENSION_OVERFLOW";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::ValidationError: return "VALIDATION_ERROR";
  }
  return "UNKNOWN";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit path) can branch on it without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace glevy
