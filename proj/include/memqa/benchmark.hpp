#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "memqa/answer.hpp"
#include "memqa/judge.hpp"
#include "memqa/metrics.hpp"
#include "memqa/retrieval.hpp"
#include "memqa/store.hpp"

namespace memqa {

struct BenchmarkCase {
  std::string question_id;
  std::string question;
  std::int64_t query_time = 0;
  int tz_offset_minutes = 0;
  std::vector<std::string> candidate_ids;
  std::vector<std::string> positive_ids;
  std::string gold_answer;
  std::string category = "other";

  RecallQuery query() const { return {question, query_time, tz_offset_minutes}; }
};

// Throws kInvalidArgument: positives must be a subset of candidates and the
// gold answer non-empty.
void validate(const BenchmarkCase& c);

// benchmark.jsonl line: {"question_id","question","query_time","candidate_ids",
// "positive_ids","gold_answer","category"} (+ optional "tz_offset_minutes").
// query_time is epoch seconds or an ISO-8601 instant.
BenchmarkCase case_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const BenchmarkCase& c);
std::vector<BenchmarkCase> load_benchmark(const std::string& path);
void write_benchmark(const std::vector<BenchmarkCase>& cases, std::ostream& out);

// Resolves a case's candidate ids against the store; kMissingMemory names
// the first unknown id.
std::vector<AugmentedMemory> resolve_candidates(const BenchmarkCase& c, const MemoryStore& store);

struct CaseRecord {
  std::string question_id;
  std::vector<std::string> ranked_ids;  // first k_retrieve
  double recall_1 = 0.0;
  double recall_3 = 0.0;
  double recall_5 = 0.0;
  double ndcg_3 = 0.0;
  double ndcg_5 = 0.0;
  std::optional<AnswerResult> answer;
  std::optional<double> a_key;
  std::optional<IdMetrics> ids;
  std::optional<bool> judged_accurate;
  std::vector<std::string> warnings;
};

struct EvalReport {
  std::size_t n_cases = 0;
  double recall_1 = 0.0;
  double recall_3 = 0.0;
  double recall_5 = 0.0;
  double ndcg_3 = 0.0;
  double ndcg_5 = 0.0;
  std::optional<double> a_key;
  std::optional<double> a_llm;
  std::optional<IdMetrics> ids;
  std::vector<CaseRecord> cases;
  nlohmann::ordered_json config;   // echo of the run configuration
  std::string fingerprint;         // FNV-1a of config
  std::vector<std::string> notes;
};

nlohmann::ordered_json to_json(const EvalReport& report);
nlohmann::ordered_json to_json(const CaseRecord& record);
void write_case_records(const EvalReport& report, std::ostream& out);

struct BenchmarkOptions {
  std::size_t k_retrieve = 5;
  std::size_t k_generate = 3;
  std::size_t workers = 1;
  nlohmann::ordered_json config;
};

// Retrieves (and optionally generates and judges) every case, then
// macro-averages. Cases run on up to `workers` threads; aggregation is in case
// order so the report is identical for any worker count.
EvalReport run_benchmark(const std::vector<BenchmarkCase>& cases, const MemoryStore& store,
                         const Retriever& retriever, const AnswerGenerator* generator, const Judge* judge,
                         const AnswerDomains& domains, const BenchmarkOptions& options);

}  // namespace memqa
