#include "memqa/retrieval.hpp"

#include "memqa/error.hpp"

namespace memqa {

Retriever::Retriever(std::shared_ptr<const Embedder> embedder, DateParser parser, RetrieverConfig config)
    : embedder_(std::move(embedder)), parser_(std::move(parser)), config_(std::move(config)) {
  if (!embedder_) throw Error(ErrorCode::kConfigError, "retriever needs an embedder");
  if (config_.strategy == RerankStrategy::kLearned && !config_.weights) {
    throw Error(ErrorCode::kMissingWeights, "learned strategy needs fusion weights");
  }
  if (config_.weights) validate(*config_.weights);
}

RetrievalResult Retriever::retrieve(const RecallQuery& query, const std::vector<AugmentedMemory>& pool) const {
  validate(query);
  auto outcome = parser_.parse(query);
  auto result = retrieve(query, pool, outcome.parse);
  result.warnings.insert(result.warnings.begin(), outcome.warnings.begin(), outcome.warnings.end());
  return result;
}

RetrievalResult Retriever::retrieve(const RecallQuery& query, const std::vector<AugmentedMemory>& pool,
                                    const TemporalParse& parse) const {
  validate(query);
  RetrievalResult result;
  result.parse = parse;

  std::vector<AugmentedMemory> eligible;
  eligible.reserve(pool.size());
  for (const auto& m : pool) {
    if (m.entry.created_at <= query.asked_at) eligible.push_back(m);
  }
  if (eligible.size() != pool.size()) {
    result.warnings.push_back(std::to_string(pool.size() - eligible.size()) +
                              " memories created after the query time were excluded");
  }
  if (eligible.empty()) return result;

  const auto signals = compute_signals(query, eligible, parse, *embedder_, config_.signals);
  std::vector<ScoredCandidate> candidates(eligible.size());
  for (std::size_t i = 0; i < eligible.size(); ++i) {
    candidates[i].memory_id = eligible[i].entry.id;
    candidates[i].created_at = eligible[i].entry.created_at;
    candidates[i].signals = signals[i];
  }
  result.ranked = rerank(std::move(candidates), config_.strategy, config_.weights);
  return result;
}

}  // namespace memqa
