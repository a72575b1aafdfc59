#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "memqa/augmentation.hpp"
#include "memqa/backend.hpp"
#include "memqa/encoding.hpp"
#include "memqa/fusion.hpp"

namespace memqa {

enum class BackendKind { kNone, kHttp, kFixture, kTopCandidate };

struct BackendConfig {
  BackendKind kind = BackendKind::kNone;
  std::string endpoint;
  std::string credential_env_var;
  int timeout_ms = 30000;
  int max_retries = 2;
  int max_tokens = 512;
  std::filesystem::path fixture_path;
};

struct EmbedderConfig {
  bool external = false;
  std::size_t dim = 256;
  bool bigrams = false;
  std::string endpoint;
  std::string credential_env_var;
  int timeout_ms = 30000;
  int max_retries = 2;
};

struct EngineConfig {
  std::filesystem::path store_path;  // empty: in-memory store
  EmbedderConfig embedder;
  ProviderConfig ocr;
  ProviderConfig caption;
  ProviderConfig completion;
  std::filesystem::path weights_path;  // empty: published weights
  RerankStrategy strategy = RerankStrategy::kLearned;
  std::size_t k_retrieve = 5;
  std::size_t k_generate = 3;
  BackendConfig generator;
  BackendConfig judge;
  BackendConfig datetime;
  std::filesystem::path domains_path;  // empty: built-in answer domains
  std::size_t workers = 4;
  std::size_t max_in_flight = 4;
  std::uint64_t seed = 0;
};

// Throws kConfigError: k_generate <= k_retrieve, both positive; referenced
// files exist; the store directory exists or can be created.
void validate(const EngineConfig& config);

// Relative paths resolve against `base_dir`. Unknown keys are rejected.
EngineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
EngineConfig load_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const EngineConfig& config);

// nullptr for BackendKind::kNone.
std::shared_ptr<TextBackend> make_backend(const BackendConfig& config);
std::shared_ptr<Embedder> make_embedder(const EmbedderConfig& config);

}  // namespace memqa
