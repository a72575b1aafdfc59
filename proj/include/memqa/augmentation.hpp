#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memqa/backend.hpp"
#include "memqa/error.hpp"
#include "memqa/types.hpp"

namespace memqa {

enum class ProviderKind { kExternalHttp, kMockSidecar };
enum class ProviderTask { kOcr, kCaption, kCompletion };

const char* to_string(ProviderTask task) noexcept;

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kMockSidecar;
  std::string endpoint;            // external-http only
  std::string credential_env_var;
  int timeout_ms = 30000;
  int max_retries = 2;
  // mock-sidecar: directory relative image_refs are resolved against.
  std::filesystem::path sidecar_root;
  // mock-sidecar: return the command unchanged when no .completion.txt exists.
  bool echo_completion = false;
};

// Throws Error(kConfigError) when invariants fail.
void validate(const ProviderConfig& config);

class AugmentationProvider {
 public:
  virtual ~AugmentationProvider() = default;
  // Returns the raw provider output for `task`.
  virtual std::string run(ProviderTask task, const MemoryEntry& entry, const std::string& prompt) = 0;
};

// Reads `<image_ref>.ocr.txt`, `<image_ref>.caption.json` and
// `<image_ref>.completion.txt`. A missing OCR sidecar means "no text"; a
// missing caption or completion sidecar is an unavailable provider.
class MockSidecarProvider final : public AugmentationProvider {
 public:
  explicit MockSidecarProvider(std::filesystem::path root = {}, bool echo_completion = false)
      : root_(std::move(root)), echo_completion_(echo_completion) {}
  std::string run(ProviderTask task, const MemoryEntry& entry, const std::string& prompt) override;

 private:
  std::filesystem::path root_;
  bool echo_completion_;
};

// Contract: POST {"task","image_ref","prompt"} -> {"output"}.
class HttpProvider final : public AugmentationProvider {
 public:
  explicit HttpProvider(const ProviderConfig& config);
  std::string run(ProviderTask task, const MemoryEntry& entry, const std::string& prompt) override;

 private:
  HttpEndpoint endpoint_;
};

std::unique_ptr<AugmentationProvider> make_provider(const ProviderConfig& config);

// Raised by Augmenter::augment when every provider failed.
class AugmentationError : public Error {
 public:
  AugmentationError(const std::string& message,
                    std::vector<std::pair<std::string, std::string>> details)
      : Error(ErrorCode::kAugmentationFailed, message), details_(std::move(details)) {}
  // (field, error) per failed provider.
  const std::vector<std::pair<std::string, std::string>>& details() const noexcept {
    return details_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> details_;
};

struct AugmentOutcome {
  AuxiliaryClue clue;
  std::vector<std::string> warnings;
};

// Turns a MemoryEntry into its auxiliary clue. Providers are shared and must
// be callable concurrently; the augmenter itself holds no mutable state.
class Augmenter {
 public:
  Augmenter(std::shared_ptr<AugmentationProvider> ocr, std::shared_ptr<AugmentationProvider> caption,
            std::shared_ptr<AugmentationProvider> completion);

  std::string run_ocr(const MemoryEntry& entry) const;
  // Returns the `image_description` field of the provider's JSON reply.
  std::string generate_qa_guided_caption(const MemoryEntry& entry) const;
  std::string complete_invocation(const MemoryEntry& entry) const;

  // A failing provider leaves its field empty and adds a warning; only a
  // total failure throws AugmentationError.
  AugmentOutcome augment(const MemoryEntry& entry) const;

  struct BatchItem {
    std::optional<AugmentOutcome> outcome;
    std::string error;  // set when outcome is empty
  };
  // Results are index-aligned with `entries`.
  std::vector<BatchItem> augment_batch(std::span<const MemoryEntry> entries,
                                       std::size_t workers) const;

 private:
  std::shared_ptr<AugmentationProvider> ocr_;
  std::shared_ptr<AugmentationProvider> caption_;
  std::shared_ptr<AugmentationProvider> completion_;
};

}  // namespace memqa
