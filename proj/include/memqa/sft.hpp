#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "memqa/benchmark.hpp"
#include "memqa/retrieval.hpp"
#include "memqa/store.hpp"

namespace memqa {

struct SftOptions {
  std::uint64_t seed = 0;
  std::size_t max_negatives = 2;
};

struct SftExample {
  std::string question_id;
  std::string prompt;
  std::string target;  // {"id_list": [...], "response": "..."}
  std::vector<std::string> candidate_ids;
  std::vector<std::string> positive_ids;
};

nlohmann::ordered_json to_json(const SftExample& example);

// One example per case with positives: all positives plus 0..max_negatives of
// the highest-ranked non-positives, shuffled. The target lists positives in
// prompt order. Same seed, same output.
std::vector<SftExample> build_sft_dataset(const std::vector<BenchmarkCase>& cases, const MemoryStore& store,
                                          const Retriever& retriever, const SftOptions& options = {});

void write_sft_dataset(const std::vector<SftExample>& examples, std::ostream& out);

}  // namespace memqa
