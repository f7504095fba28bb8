#include "reval/error.hpp"

namespace reval {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingCriterion: return "MissingCriterion";
    case ErrorCode::UnknownCriterion: return "UnknownCriterion";
    case ErrorCode::InvalidEdit: return "InvalidEdit";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::MissingPerformance: return "MissingPerformance";
    case ErrorCode::EmbeddingFailure: return "EmbeddingFailure";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::ProviderError: return "ProviderError";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::EmptyCompletion: return "EmptyCompletion";
    case ErrorCode::BlockNotFound: return "BlockNotFound";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DegenerateAgreementDenominator: return "DegenerateAgreementDenominator";
    case ErrorCode::MappingError: return "MappingError";
    case ErrorCode::RowError: return "RowError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::Overflow: return "Overflow";
  }
  return "UnknownError";
}

}  // namespace reval
