#include "memqa/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <thread>

#include "memqa/calendar.hpp"
#include "memqa/error.hpp"
#include "memqa/text.hpp"

namespace memqa {

void validate(const BenchmarkCase& c) {
  if (c.question_id.empty()) throw Error(ErrorCode::kInvalidArgument, "case without question_id");
  if (c.question.empty()) throw Error(ErrorCode::kInvalidArgument, c.question_id + ": empty question");
  if (c.query_time <= 0) throw Error(ErrorCode::kInvalidArgument, c.question_id + ": non-positive query_time");
  if (trim(c.gold_answer).empty()) throw Error(ErrorCode::kInvalidArgument, c.question_id + ": empty gold_answer");
  const std::set<std::string> candidates(c.candidate_ids.begin(), c.candidate_ids.end());
  for (const auto& p : c.positive_ids) {
    if (!candidates.contains(p)) {
      throw Error(ErrorCode::kInvalidArgument, c.question_id + ": positive " + p + " is not a candidate");
    }
  }
}

BenchmarkCase case_from_json(const nlohmann::json& j) {
  try {
    BenchmarkCase c;
    c.question_id = j.at("question_id").is_string() ? j.at("question_id").get<std::string>()
                                                     : j.at("question_id").dump();
    c.question = j.at("question").get<std::string>();
    const auto& t = j.at("query_time");
    if (t.is_number_integer()) {
      c.query_time = t.get<std::int64_t>();
    } else {
      auto parsed = parse_iso_instant(t.get<std::string>());
      if (!parsed) throw Error(ErrorCode::kInvalidArgument, c.question_id + ": bad query_time");
      c.query_time = *parsed;
    }
    c.tz_offset_minutes = j.value("tz_offset_minutes", 0);
    c.candidate_ids = j.at("candidate_ids").get<std::vector<std::string>>();
    c.positive_ids = j.at("positive_ids").get<std::vector<std::string>>();
    c.gold_answer = j.at("gold_answer").get<std::string>();
    c.category = j.value("category", std::string("other"));
    validate(c);
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad benchmark case: ") + ex.what());
  }
}

nlohmann::ordered_json to_json(const BenchmarkCase& c) {
  nlohmann::ordered_json j;
  j["question_id"] = c.question_id;
  j["question"] = c.question;
  j["query_time"] = c.query_time;
  if (c.tz_offset_minutes != 0) j["tz_offset_minutes"] = c.tz_offset_minutes;
  j["candidate_ids"] = c.candidate_ids;
  j["positive_ids"] = c.positive_ids;
  j["gold_answer"] = c.gold_answer;
  j["category"] = c.category;
  return j;
}

std::vector<BenchmarkCase> load_benchmark(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open benchmark " + path);
  std::vector<BenchmarkCase> cases;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (trim(line).empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      throw Error(ErrorCode::kInvalidArgument, path + ":" + std::to_string(n) + ": invalid JSON");
    }
    cases.push_back(case_from_json(j));
  }
  return cases;
}

void write_benchmark(const std::vector<BenchmarkCase>& cases, std::ostream& out) {
  for (const auto& c : cases) out << to_json(c).dump() << '\n';
}

std::vector<AugmentedMemory> resolve_candidates(const BenchmarkCase& c, const MemoryStore& store) {
  std::vector<AugmentedMemory> pool;
  pool.reserve(c.candidate_ids.size());
  for (const auto& id : c.candidate_ids) {
    auto m = store.get(id);
    if (!m) throw Error(ErrorCode::kMissingMemory, c.question_id + " references unknown memory " + id);
    pool.push_back(std::move(*m));
  }
  return pool;
}

nlohmann::ordered_json to_json(const CaseRecord& r) {
  nlohmann::ordered_json j;
  j["question_id"] = r.question_id;
  j["ranked_ids"] = r.ranked_ids;
  j["recall@1"] = r.recall_1;
  j["recall@3"] = r.recall_3;
  j["recall@5"] = r.recall_5;
  j["ndcg@3"] = r.ndcg_3;
  j["ndcg@5"] = r.ndcg_5;
  if (r.answer) j["answer"] = to_json(*r.answer);
  if (r.a_key) j["a_key"] = *r.a_key;
  if (r.ids) {
    j["id_precision"] = r.ids->precision;
    j["id_recall"] = r.ids->recall;
    j["id_f1"] = r.ids->f1;
  }
  if (r.judged_accurate) j["judge_accurate"] = *r.judged_accurate;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

nlohmann::ordered_json to_json(const EvalReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(); };
  nlohmann::ordered_json metrics;
  metrics["recall@1"] = r.recall_1;
  metrics["recall@3"] = r.recall_3;
  metrics["recall@5"] = r.recall_5;
  metrics["ndcg@3"] = r.ndcg_3;
  metrics["ndcg@5"] = r.ndcg_5;
  metrics["a_key"] = opt(r.a_key);
  metrics["a_llm"] = opt(r.a_llm);
  metrics["id_precision"] = opt(r.ids ? std::optional<double>(r.ids->precision) : std::nullopt);
  metrics["id_recall"] = opt(r.ids ? std::optional<double>(r.ids->recall) : std::nullopt);
  metrics["id_f1"] = opt(r.ids ? std::optional<double>(r.ids->f1) : std::nullopt);

  nlohmann::ordered_json j;
  j["n_cases"] = r.n_cases;
  j["metrics"] = metrics;
  j["config"] = r.config;
  j["config_fingerprint"] = r.fingerprint;
  j["notes"] = r.notes;
  return j;
}

void write_case_records(const EvalReport& report, std::ostream& out) {
  for (const auto& c : report.cases) out << to_json(c).dump() << '\n';
}

namespace {

CaseRecord run_case(const BenchmarkCase& c, const std::vector<AugmentedMemory>& pool, const Retriever& retriever,
                    const AnswerGenerator* generator, const Judge* judge, const AnswerDomains& domains,
                    const BenchmarkOptions& options) {
  CaseRecord rec;
  rec.question_id = c.question_id;
  const RecallQuery query = c.query();
  const auto result = retriever.retrieve(query, pool);
  rec.warnings = result.warnings;

  std::vector<std::string> ranked;
  ranked.reserve(result.ranked.size());
  for (const auto& s : result.ranked) ranked.push_back(s.memory_id);
  rec.ranked_ids.assign(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(
                                                             std::min(options.k_retrieve, ranked.size())));
  rec.recall_1 = recall_at_k(ranked, c.positive_ids, 1);
  rec.recall_3 = recall_at_k(ranked, c.positive_ids, 3);
  rec.recall_5 = recall_at_k(ranked, c.positive_ids, 5);
  rec.ndcg_3 = ndcg_at_k(ranked, c.positive_ids, 3);
  rec.ndcg_5 = ndcg_at_k(ranked, c.positive_ids, 5);

  if (generator && !result.ranked.empty()) {
    std::vector<AugmentedMemory> selected;
    for (const auto& s : top_k(result.ranked, options.k_generate)) {
      auto it = std::find_if(pool.begin(), pool.end(), [&](const AugmentedMemory& m) { return m.entry.id == s.memory_id; });
      selected.push_back(*it);
    }
    rec.answer = generator->generate(query, selected);
    rec.a_key = a_key(rec.answer->response, c.gold_answer, category_from_string(c.category), domains);
    rec.ids = id_detection_metrics(rec.answer->id_list, c.positive_ids);
    if (judge) rec.judged_accurate = judge->judge(c.question, c.gold_answer, rec.answer->response).accurate;
  }
  return rec;
}

}  // namespace

EvalReport run_benchmark(const std::vector<BenchmarkCase>& cases, const MemoryStore& store,
                         const Retriever& retriever, const AnswerGenerator* generator, const Judge* judge,
                         const AnswerDomains& domains, const BenchmarkOptions& options) {
  if (options.k_retrieve == 0 || options.k_generate == 0) {
    throw Error(ErrorCode::kInvalidArgument, "k_retrieve and k_generate must be positive");
  }
  std::vector<std::vector<AugmentedMemory>> pools;
  pools.reserve(cases.size());
  for (const auto& c : cases) {
    validate(c);
    if (c.positive_ids.empty()) throw Error(ErrorCode::kNoPositives, c.question_id + " has no positive ids");
    pools.push_back(resolve_candidates(c, store));
  }

  EvalReport report;
  report.n_cases = cases.size();
  report.cases.resize(cases.size());
  std::vector<std::string> errors(cases.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        report.cases[i] = run_case(cases[i], pools[i], retriever, generator, judge, domains, options);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const std::size_t n = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(1, cases.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
    work();
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw Error(ErrorCode::kInvalidArgument, cases[i].question_id + ": " + errors[i]);
  }

  double a_key_sum = 0.0, judge_sum = 0.0;
  IdMetrics id_sum;
  std::size_t generated = 0, judged = 0;
  for (const auto& r : report.cases) {
    report.recall_1 += r.recall_1;
    report.recall_3 += r.recall_3;
    report.recall_5 += r.recall_5;
    report.ndcg_3 += r.ndcg_3;
    report.ndcg_5 += r.ndcg_5;
    if (r.a_key) {
      ++generated;
      a_key_sum += *r.a_key;
      id_sum.precision += r.ids->precision;
      id_sum.recall += r.ids->recall;
      id_sum.f1 += r.ids->f1;
    }
    if (r.judged_accurate) {
      ++judged;
      judge_sum += *r.judged_accurate ? 1.0 : 0.0;
    }
  }
  if (!cases.empty()) {
    const double n_cases = static_cast<double>(cases.size());
    report.recall_1 /= n_cases;
    report.recall_3 /= n_cases;
    report.recall_5 /= n_cases;
    report.ndcg_3 /= n_cases;
    report.ndcg_5 /= n_cases;
  }
  if (generated > 0) {
    const double g = static_cast<double>(generated);
    report.a_key = a_key_sum / g;
    report.ids = IdMetrics{id_sum.precision / g, id_sum.recall / g, id_sum.f1 / g};
  }
  if (judged > 0) report.a_llm = judge_sum / static_cast<double>(judged);

  report.config = options.config;
  report.fingerprint = hex64(fnv1a64(options.config.dump()));
  report.notes = {
      "recall@k is macro-averaged per case with |positives| as denominator",
      "a_key: closed categories use domain-restricted F1; other categories use gold keyword recall "
      "in place of a model-based recall score",
      "a_llm is reported only when a judge backend is configured",
      "answer domains: " + domains.version(),
  };
  return report;
}

}  // namespace memqa
