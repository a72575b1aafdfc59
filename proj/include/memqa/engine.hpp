#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "memqa/answer.hpp"
#include "memqa/augmentation.hpp"
#include "memqa/benchmark.hpp"
#include "memqa/config.hpp"
#include "memqa/judge.hpp"
#include "memqa/metrics.hpp"
#include "memqa/ranksvm.hpp"
#include "memqa/retrieval.hpp"
#include "memqa/sft.hpp"
#include "memqa/store.hpp"

namespace memqa {

struct IngestReport {
  std::size_t added = 0;
  std::size_t skipped = 0;  // id already present
};

struct AugmentReport {
  std::size_t augmented = 0;
  std::size_t failed = 0;
  std::vector<std::string> errors;  // "id: message"
};

struct QueryResult {
  RetrievalResult retrieval;                // full ranking
  std::vector<ScoredCandidate> candidates;  // top k_retrieve
  std::optional<AnswerResult> answer;
};

nlohmann::ordered_json to_json(const QueryResult& result);

// The pipeline wired from an EngineConfig. Everything except the store is
// immutable after construction, so queries may run concurrently.
class Engine {
 public:
  explicit Engine(EngineConfig config);
  // Test hook: inject backends and providers directly.
  Engine(EngineConfig config, std::shared_ptr<Embedder> embedder,
         std::shared_ptr<AugmentationProvider> provider, std::shared_ptr<TextBackend> generator);

  const EngineConfig& config() const noexcept { return config_; }
  MemoryStore& store() noexcept { return *store_; }
  const MemoryStore& store() const noexcept { return *store_; }
  const Retriever& retriever() const noexcept { return *retriever_; }
  const Embedder& embedder() const noexcept { return *embedder_; }

  // Stores `entry`; with augment=true the clue and embedding are attached
  // before it becomes visible. Throws kDuplicateId, AugmentationError.
  std::string record(const MemoryEntry& entry, bool augment, std::vector<std::string>* warnings = nullptr);
  // Augments every memory that has no clue yet.
  AugmentReport augment_pending();
  IngestReport ingest_file(const std::string& path);

  // Ranks memories created up to the query instant. `answer` calls the
  // generator on the top k_generate (kBackendUnavailable without one).
  QueryResult query(const RecallQuery& q, bool answer, std::optional<std::size_t> k = std::nullopt) const;

  EvalReport evaluate(const std::vector<BenchmarkCase>& cases, bool generate) const;
  RankTrainingSet training_set(const std::vector<BenchmarkCase>& cases) const;
  std::vector<SftExample> sft(const std::vector<BenchmarkCase>& cases, std::uint64_t seed) const;

 private:
  void wire(std::shared_ptr<AugmentationProvider> ocr, std::shared_ptr<AugmentationProvider> caption,
            std::shared_ptr<AugmentationProvider> completion, std::shared_ptr<TextBackend> generator);
  AugmentedMemory augmented(const MemoryEntry& entry, std::vector<std::string>* warnings) const;

  EngineConfig config_;
  std::shared_ptr<Embedder> embedder_;
  std::unique_ptr<MemoryStore> store_;
  std::unique_ptr<Augmenter> augmenter_;
  std::unique_ptr<Retriever> retriever_;
  std::unique_ptr<AnswerGenerator> generator_;
  std::unique_ptr<Judge> judge_;
  AnswerDomains domains_;
};

}  // namespace memqa
