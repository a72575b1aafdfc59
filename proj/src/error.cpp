#include "memqa/error.hpp"

namespace memqa {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidEntry: return "InvalidEntry";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kUnknownId: return "UnknownId";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kCorruptStore: return "CorruptStore";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kMalformedProviderOutput: return "MalformedProviderOutput";
    case ErrorCode::kAugmentationFailed: return "AugmentationFailed";
    case ErrorCode::kEncoderUnavailable: return "EncoderUnavailable";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kNegativeInterval: return "NegativeInterval";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kMissingWeights: return "MissingWeights";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kTooManyCandidates: return "TooManyCandidates";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kNoPositives: return "NoPositives";
    case ErrorCode::kEmptyGold: return "EmptyGold";
    case ErrorCode::kJudgeUnavailable: return "JudgeUnavailable";
    case ErrorCode::kMalformedJudgeOutput: return "MalformedJudgeOutput";
    case ErrorCode::kMissingMemory: return "MissingMemory";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace memqa
