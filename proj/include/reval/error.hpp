#pragma once

#include <stdexcept>
#include <string>

namespace reval {

enum class ErrorCode {
  // rubric / score domain
  MissingCriterion,
  UnknownCriterion,
  InvalidEdit,
  NotFound,
  ParseError,
  ValidationError,
  // retrieval
  DimensionMismatch,
  ZeroVector,
  MissingPerformance,
  EmbeddingFailure,
  IoError,
  FormatError,
  // providers
  ProviderError,
  RateLimited,
  EmptyCompletion,
  BlockNotFound,
  // statistics
  ZeroVariance,
  LengthMismatch,
  OutOfRange,
  DegenerateAgreementDenominator,
  // dataset
  MappingError,
  RowError,
  // misc
  ConfigError,
  Overflow,
};

const char* error_code_name(ErrorCode code);

// Single exception type for the whole engine. `detail` carries an optional
// machine-usable payload (e.g. the raw completion text that failed to parse).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string detail = "")
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        detail_(std::move(detail)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace reval
