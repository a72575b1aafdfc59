#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "memqa/fusion.hpp"
#include "memqa/ranksvm.hpp"

namespace memqa {

// Signal-level ranking data. Each query gets 10-50 candidates with
//   r_t in {0,1} (p = 0.3), r_r ~ U[0,1] if the query has recent intent,
//   r_l ~ U[0,1] if it has a location anchor, r_s ~ U[-0.2, 0.9],
// and exactly one positive: the argmax of the planted weights, ahead of the
// runner-up by at least `margin`.
struct SignalSuiteOptions {
  std::uint64_t seed = 7;
  std::size_t queries = 500;
  std::size_t min_candidates = 10;
  std::size_t max_candidates = 50;
  FusionWeights planted{0.3, 0.2, 0.2, 0.3, {}, std::nullopt};
  double margin = 0.05;
};

RankTrainingSet generate_signal_suite(const SignalSuiteOptions& options = {});

// Fraction of queries whose top-ranked candidate is a positive under
// `strategy` (ids q<n>_c<i>, created_at = i).
double recall_at_1(const RankTrainingSet& data, RerankStrategy strategy,
                   const std::optional<FusionWeights>& weights = std::nullopt);

// End-to-end benchmark on disk: memories.jsonl, mock-provider sidecars under
// images/ and bench.jsonl. Cases cycle through "yesterday", "last week" and
// city-anchored questions; each has one positive, three same-topic
// distractors that only the planted constraint separates, and fillers from
// other topics. The gold answer is the positive's OCR text.
struct E2eSuiteOptions {
  std::uint64_t seed = 11;
  std::size_t cases = 200;
  std::size_t min_fillers = 6;
  std::size_t max_fillers = 20;
};

struct E2eSuite {
  std::filesystem::path root;       // sidecar root
  std::filesystem::path memories;   // memories.jsonl
  std::filesystem::path benchmark;  // bench.jsonl
  std::size_t memory_count = 0;
  std::vector<std::string> temporal_ids;  // question ids with a date anchor
};

E2eSuite write_e2e_suite(const std::filesystem::path& dir, const E2eSuiteOptions& options = {});

}  // namespace memqa
