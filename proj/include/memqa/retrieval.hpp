#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "memqa/encoding.hpp"
#include "memqa/fusion.hpp"
#include "memqa/temporal.hpp"

namespace memqa {

struct RetrieverConfig {
  RerankStrategy strategy = RerankStrategy::kLearned;
  std::optional<FusionWeights> weights = FusionWeights::published();
  SignalOptions signals;
};

struct RetrievalResult {
  TemporalParse parse;
  std::vector<ScoredCandidate> ranked;  // whole pool, ranked
  std::vector<std::string> warnings;
};

// Multi-signal retriever: temporal parse, signal computation, fusion and
// ranking over a candidate pool. Stateless per call.
class Retriever {
 public:
  Retriever(std::shared_ptr<const Embedder> embedder, DateParser parser, RetrieverConfig config);

  // Memories created after the query instant are dropped with a warning.
  RetrievalResult retrieve(const RecallQuery& query, const std::vector<AugmentedMemory>& pool) const;
  // Same, with an already parsed query (skips the date parser).
  RetrievalResult retrieve(const RecallQuery& query, const std::vector<AugmentedMemory>& pool,
                           const TemporalParse& parse) const;

  const RetrieverConfig& config() const noexcept { return config_; }
  const Embedder& embedder() const noexcept { return *embedder_; }
  const DateParser& parser() const noexcept { return parser_; }

 private:
  std::shared_ptr<const Embedder> embedder_;
  DateParser parser_;
  RetrieverConfig config_;
};

}  // namespace memqa
