#include "memqa/sft.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "memqa/answer.hpp"
#include "memqa/log.hpp"

namespace memqa {

nlohmann::ordered_json to_json(const SftExample& e) {
  nlohmann::ordered_json j;
  j["question_id"] = e.question_id;
  j["prompt"] = e.prompt;
  j["target"] = e.target;
  j["candidate_ids"] = e.candidate_ids;
  j["positive_ids"] = e.positive_ids;
  return j;
}

std::vector<SftExample> build_sft_dataset(const std::vector<BenchmarkCase>& cases, const MemoryStore& store,
                                          const Retriever& retriever, const SftOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<SftExample> out;
  for (const auto& c : cases) {
    if (c.positive_ids.empty()) {
      log::info("sft: skipping " + c.question_id + " (no positives)");
      continue;
    }
    const auto pool = resolve_candidates(c, store);
    const auto result = retriever.retrieve(c.query(), pool);
    const std::set<std::string> positives(c.positive_ids.begin(), c.positive_ids.end());

    std::vector<std::string> negatives;
    for (const auto& s : result.ranked) {
      if (!positives.contains(s.memory_id)) negatives.push_back(s.memory_id);
    }
    const std::size_t wanted = static_cast<std::size_t>(rng() % (options.max_negatives + 1));
    negatives.resize(std::min(wanted, negatives.size()));

    std::vector<std::string> ids;
    for (const auto& p : c.positive_ids) {
      if (std::find(ids.begin(), ids.end(), p) == ids.end()) ids.push_back(p);
    }
    ids.insert(ids.end(), negatives.begin(), negatives.end());
    for (std::size_t i = ids.size(); i > 1; --i) {
      std::swap(ids[i - 1], ids[static_cast<std::size_t>(rng() % i)]);
    }

    std::vector<AugmentedMemory> selected;
    for (const auto& id : ids) {
      selected.push_back(*std::find_if(pool.begin(), pool.end(),
                                       [&](const AugmentedMemory& m) { return m.entry.id == id; }));
    }

    SftExample ex;
    ex.question_id = c.question_id;
    ex.prompt = build_answer_prompt(c.query(), selected);
    ex.candidate_ids = ids;
    for (const auto& id : ids) {
      if (positives.contains(id)) ex.positive_ids.push_back(id);
    }
    nlohmann::ordered_json target;
    target["id_list"] = ex.positive_ids;
    target["response"] = c.gold_answer;
    ex.target = target.dump();
    out.push_back(std::move(ex));
  }
  return out;
}

void write_sft_dataset(const std::vector<SftExample>& examples, std::ostream& out) {
  for (const auto& e : examples) out << to_json(e).dump() << '\n';
}

}  // namespace memqa
