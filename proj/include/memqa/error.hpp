#pragma once

#include <stdexcept>
#include <string>

namespace memqa {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidEntry,
  kDuplicateId,
  kUnknownId,
  kDimensionMismatch,
  kCorruptStore,
  kIoError,
  kProviderUnavailable,
  kTimeout,
  kMalformedProviderOutput,
  kAugmentationFailed,
  kEncoderUnavailable,
  kEmptyInput,
  kNegativeInterval,
  kNonFiniteScore,
  kMissingWeights,
  kDegenerateData,
  kNonConvergence,
  kTooManyCandidates,
  kBackendUnavailable,
  kNoPositives,
  kEmptyGold,
  kJudgeUnavailable,
  kMalformedJudgeOutput,
  kMissingMemory,
  kConfigError,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries a code so callers (HTTP layer,
// CLI exit codes) can map it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace memqa
