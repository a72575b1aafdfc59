#include "memqa/engine.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

#include "memqa/error.hpp"
#include "memqa/log.hpp"
#include "memqa/text.hpp"

namespace memqa {

nlohmann::ordered_json to_json(const QueryResult& r) {
  nlohmann::ordered_json j;
  j["parse"] = to_json(r.retrieval.parse);
  auto cands = nlohmann::ordered_json::array();
  for (const auto& c : r.candidates) {
    nlohmann::ordered_json e;
    e["rank"] = c.rank;
    e["memory_id"] = c.memory_id;
    e["created_at"] = c.created_at;
    e["score"] = c.fused;
    e["signals"] = {{"r_t", c.signals.r_t}, {"r_r", c.signals.r_r}, {"r_l", c.signals.r_l}, {"r_s", c.signals.r_s}};
    cands.push_back(std::move(e));
  }
  j["candidates"] = std::move(cands);
  if (r.answer) j["answer"] = to_json(*r.answer);
  j["warnings"] = r.retrieval.warnings;
  return j;
}

Engine::Engine(EngineConfig config) : config_(std::move(config)) {
  validate(config_);
  embedder_ = make_embedder(config_.embedder);
  wire(make_provider(config_.ocr), make_provider(config_.caption), make_provider(config_.completion),
       make_backend(config_.generator));
}

Engine::Engine(EngineConfig config, std::shared_ptr<Embedder> embedder, std::shared_ptr<AugmentationProvider> provider,
               std::shared_ptr<TextBackend> generator)
    : config_(std::move(config)), embedder_(std::move(embedder)) {
  validate(config_);
  if (!embedder_) embedder_ = make_embedder(config_.embedder);
  if (!provider) {
    wire(make_provider(config_.ocr), make_provider(config_.caption), make_provider(config_.completion),
         std::move(generator));
  } else {
    wire(provider, provider, provider, std::move(generator));
  }
}

void Engine::wire(std::shared_ptr<AugmentationProvider> ocr, std::shared_ptr<AugmentationProvider> caption,
                  std::shared_ptr<AugmentationProvider> completion, std::shared_ptr<TextBackend> generator) {
  store_ = config_.store_path.empty() ? std::make_unique<MemoryStore>(embedder_->dim())
                                      : std::make_unique<MemoryStore>(config_.store_path, embedder_->dim());
  augmenter_ = std::make_unique<Augmenter>(std::move(ocr), std::move(caption), std::move(completion));

  RetrieverConfig rc;
  rc.strategy = config_.strategy;
  rc.weights = config_.weights_path.empty() ? FusionWeights::published() : load_weights(config_.weights_path.string());
  retriever_ = std::make_unique<Retriever>(embedder_, DateParser(make_backend(config_.datetime)), rc);

  if (generator) generator_ = std::make_unique<AnswerGenerator>(std::move(generator), config_.max_in_flight);
  if (auto judge = make_backend(config_.judge)) judge_ = std::make_unique<Judge>(std::move(judge));
  domains_ = config_.domains_path.empty() ? AnswerDomains::defaults()
                                          : AnswerDomains::from_file(config_.domains_path.string());
}

AugmentedMemory Engine::augmented(const MemoryEntry& entry, std::vector<std::string>* warnings) const {
  auto outcome = augmenter_->augment(entry);
  if (warnings) warnings->insert(warnings->end(), outcome.warnings.begin(), outcome.warnings.end());
  AugmentedMemory m{entry, outcome.clue, std::nullopt, true};
  m.embedding = embedder_->encode_memory(m);
  return m;
}

std::string Engine::record(const MemoryEntry& entry, bool augment, std::vector<std::string>* warnings) {
  validate(entry);
  if (store_->get(entry.id)) throw Error(ErrorCode::kDuplicateId, "memory " + entry.id + " already exists");
  if (!augment) return store_->put(entry);
  auto m = augmented(entry, warnings);
  const auto id = store_->put(entry);
  store_->attach_augmentation(id, m.clue, m.embedding);
  return id;
}

AugmentReport Engine::augment_pending() {
  std::vector<MemoryEntry> pending;
  for (const auto& m : store_->scan()) {
    if (!m.augmented) pending.push_back(m.entry);
  }
  AugmentReport report;
  const auto results = augmenter_->augment_batch(pending, config_.workers);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const auto& item = results[i];
    if (!item.outcome) {
      ++report.failed;
      report.errors.push_back(pending[i].id + ": " + item.error);
      continue;
    }
    for (const auto& w : item.outcome->warnings) log::warn(pending[i].id + ": " + w);
    AugmentedMemory m{pending[i], item.outcome->clue, std::nullopt, true};
    try {
      m.embedding = embedder_->encode_memory(m);
      store_->attach_augmentation(m.entry.id, m.clue, m.embedding);
      ++report.augmented;
    } catch (const Error& e) {
      ++report.failed;
      report.errors.push_back(pending[i].id + ": " + e.what());
    }
  }
  return report;
}

IngestReport Engine::ingest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  IngestReport report;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::kInvalidEntry, path + ":" + std::to_string(n) + ": invalid JSON");
    const auto entry = entry_from_json(j);
    if (store_->get(entry.id)) {
      ++report.skipped;
      continue;
    }
    store_->put(entry);
    ++report.added;
  }
  return report;
}

QueryResult Engine::query(const RecallQuery& q, bool answer, std::optional<std::size_t> k) const {
  validate(q);
  const std::size_t k_retrieve = k.value_or(config_.k_retrieve);
  if (k_retrieve == 0) throw Error(ErrorCode::kInvalidArgument, "k must be positive");
  if (answer && !generator_) throw Error(ErrorCode::kBackendUnavailable, "no generator backend configured");

  QueryResult r;
  const auto pool = store_->scan(TimeWindow{std::numeric_limits<std::int64_t>::min(), q.asked_at});
  r.retrieval = retriever_->retrieve(q, pool);
  if (!r.retrieval.ranked.empty()) r.candidates = top_k(r.retrieval.ranked, k_retrieve);
  if (answer) {
    if (r.candidates.empty()) {
      r.answer = AnswerResult{{}, "", false, {"no memories to answer from"}};
    } else {
      std::vector<AugmentedMemory> selected;
      const std::size_t n = std::min(config_.k_generate, r.candidates.size());
      for (std::size_t i = 0; i < n; ++i) {
        auto it = std::find_if(pool.begin(), pool.end(),
                               [&](const AugmentedMemory& m) { return m.entry.id == r.candidates[i].memory_id; });
        selected.push_back(*it);
      }
      r.answer = generator_->generate(q, selected);
    }
  }
  return r;
}

EvalReport Engine::evaluate(const std::vector<BenchmarkCase>& cases, bool generate) const {
  if (generate && !generator_) throw Error(ErrorCode::kBackendUnavailable, "no generator backend configured");
  BenchmarkOptions opts;
  opts.k_retrieve = config_.k_retrieve;
  opts.k_generate = config_.k_generate;
  opts.workers = config_.workers;
  auto cfg = to_json(config_);
  cfg.erase("store");
  cfg.erase("workers");
  cfg["generate"] = generate;
  opts.config = cfg;
  return run_benchmark(cases, *store_, *retriever_, generate ? generator_.get() : nullptr,
                       generate ? judge_.get() : nullptr, domains_, opts);
}

RankTrainingSet Engine::training_set(const std::vector<BenchmarkCase>& cases) const {
  RankTrainingSet data;
  for (const auto& c : cases) {
    const auto pool = resolve_candidates(c, *store_);
    const auto result = retriever_->retrieve(c.query(), pool);
    const std::set<std::string> positives(c.positive_ids.begin(), c.positive_ids.end());
    std::vector<LabeledSignals> group;
    for (const auto& s : result.ranked) group.push_back({s.signals, positives.contains(s.memory_id)});
    data.queries.push_back(std::move(group));
  }
  return data;
}

std::vector<SftExample> Engine::sft(const std::vector<BenchmarkCase>& cases, std::uint64_t seed) const {
  return build_sft_dataset(cases, *store_, *retriever_, SftOptions{seed, 2});
}

}  // namespace memqa
