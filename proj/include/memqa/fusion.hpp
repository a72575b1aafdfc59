#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "memqa/bm25.hpp"
#include "memqa/encoding.hpp"
#include "memqa/temporal.hpp"
#include "memqa/types.hpp"

namespace memqa {

// Per-candidate retrieval signals: date match, recency, location, similarity.
struct SignalVector {
  double r_t = 0.0;
  double r_r = 0.0;
  double r_l = 0.0;
  double r_s = 0.0;

  bool operator==(const SignalVector&) const = default;
};

struct FusionWeights {
  double w_t = 0.0;
  double w_r = 0.0;
  double w_l = 0.0;
  double w_s = 0.0;
  std::string trained_at;          // empty when not produced by training
  std::optional<double> c_reg;

  // Weights published for the learned-weight re-ranker.
  static FusionWeights published() { return {0.08, 0.22, 0.16, 0.53, {}, std::nullopt}; }
};

// Throws kInvalidArgument if all weights are zero or any is non-finite.
void validate(const FusionWeights& w);
nlohmann::ordered_json to_json(const FusionWeights& w);
FusionWeights weights_from_json(const nlohmann::json& j);
FusionWeights load_weights(const std::string& path);
void save_weights(const FusionWeights& w, const std::string& path);

// s = w_t R_t + w_r R_r + w_l R_l + w_s R_s. Throws kNonFiniteScore.
double fuse(const SignalVector& s, const FusionWeights& w);

struct ScoredCandidate {
  std::string memory_id;
  std::int64_t created_at = 0;
  SignalVector signals;
  double fused = 0.0;
  std::size_t rank = 0;  // 1-based, set by rerank
};

struct SignalOptions {
  DecayConstants decay;
  Bm25Params bm25;
  bool normalize_location = true;
};

// One SignalVector per pool entry, index-aligned. Location BM25 statistics
// are computed over the pool and min-max normalized into [0, 1]. Memories
// without a stored embedding are encoded on the fly.
std::vector<SignalVector> compute_signals(const RecallQuery& query, const std::vector<AugmentedMemory>& pool,
                                          const TemporalParse& parse, const Embedder& embedder,
                                          const SignalOptions& options = {});

// Min-max into [0,1]; when all values are equal, positive values map to 1 and
// zeros stay 0.
void min_max_normalize(std::vector<double>& values);

enum class RerankStrategy { kMax, kSum, kLearned };

const char* to_string(RerankStrategy s) noexcept;
RerankStrategy strategy_from_string(std::string_view name);

// Sorts by strategy score descending, then created_at descending, then id
// ascending, and assigns ranks. `kMax` compares the signals sorted in
// descending order lexicographically. `kLearned` needs weights
// (kMissingWeights otherwise).
std::vector<ScoredCandidate> rerank(std::vector<ScoredCandidate> candidates, RerankStrategy strategy,
                                    const std::optional<FusionWeights>& weights = std::nullopt);

// First min(k, n) entries. Throws kInvalidArgument for k == 0.
std::vector<ScoredCandidate> top_k(const std::vector<ScoredCandidate>& ranked, std::size_t k);

}  // namespace memqa
