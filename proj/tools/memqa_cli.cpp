#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "memqa/calendar.hpp"
#include "memqa/engine.hpp"
#include "memqa/error.hpp"
#include "memqa/log.hpp"
#include "memqa/ranksvm.hpp"
#include "memqa/service.hpp"
#include "memqa/synthetic.hpp"

namespace {

struct Options {
  std::string config;
  std::string store;
  std::string sidecar_root;
  std::string generator;
  std::string bench;
  std::string weights_out = "weights.json";
  std::string strategy;
  std::string weights;
  std::string out;
  std::string cases_out;
  std::string question;
  std::string asked_at;
  std::string host = "127.0.0.1";
  std::size_t k = 0;
  int tz = 0;
  int port = 8080;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool answer = false;
  bool generate = false;
  bool json = false;
  double c_reg = 1.0;
  std::size_t cases = 200;
};

memqa::EngineConfig make_config(const Options& o) {
  memqa::EngineConfig c;
  if (!o.config.empty()) c = memqa::load_config(o.config);
  if (!o.store.empty()) c.store_path = o.store;
  if (!o.sidecar_root.empty()) {
    for (auto* p : {&c.ocr, &c.caption, &c.completion}) {
      p->kind = memqa::ProviderKind::kMockSidecar;
      p->sidecar_root = o.sidecar_root;
    }
  }
  if (o.generator == "top-candidate") c.generator.kind = memqa::BackendKind::kTopCandidate;
  else if (o.generator == "none") c.generator.kind = memqa::BackendKind::kNone;
  if (!o.strategy.empty()) c.strategy = memqa::strategy_from_string(o.strategy);
  if (!o.weights.empty()) c.weights_path = o.weights;
  if (o.k > 0) {
    c.k_retrieve = o.k;
    c.k_generate = std::min(c.k_generate, o.k);
  }
  if (o.seed_set) c.seed = o.seed;
  memqa::validate(c);
  return c;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw memqa::Error(memqa::ErrorCode::kIoError, "cannot write " + path);
  f << content;
}

int cmd_ingest(const Options& o, const std::string& file) {
  memqa::Engine engine(make_config(o));
  const auto r = engine.ingest_file(file);
  std::cout << "ingested " << r.added << " memories (" << r.skipped << " already present)\n";
  return 0;
}

int cmd_augment(const Options& o) {
  memqa::Engine engine(make_config(o));
  const auto r = engine.augment_pending();
  std::cout << "augmented " << r.augmented << ", failed " << r.failed << "\n";
  for (const auto& e : r.errors) std::cerr << e << "\n";
  return r.failed == 0 ? 0 : 2;
}

int cmd_query(const Options& o) {
  memqa::Engine engine(make_config(o));
  memqa::RecallQuery q;
  q.text = o.question;
  q.timezone_offset_minutes = o.tz;
  if (o.asked_at.empty()) {
    q.asked_at = std::chrono::duration_cast<std::chrono::seconds>(
                     std::chrono::system_clock::now().time_since_epoch()).count();
  } else {
    auto t = memqa::parse_iso_instant(o.asked_at);
    if (!t) throw memqa::Error(memqa::ErrorCode::kInvalidArgument, "bad --asked-at " + o.asked_at);
    q.asked_at = *t;
  }
  const auto r = engine.query(q, o.answer);
  if (o.json) {
    std::cout << memqa::to_json(r).dump(2) << "\n";
    return 0;
  }
  for (const auto& w : r.retrieval.warnings) std::cerr << "warning: " << w << "\n";
  if (r.candidates.empty()) std::cout << "no memories\n";
  for (const auto& c : r.candidates) {
    std::printf("%2zu  %-24s  %.4f  t=%.0f r=%.3f l=%.3f s=%.3f\n", c.rank, c.memory_id.c_str(), c.fused,
                c.signals.r_t, c.signals.r_r, c.signals.r_l, c.signals.r_s);
  }
  if (r.answer) {
    std::cout << "\nanswer: " << r.answer->response << "\nids:";
    for (const auto& id : r.answer->id_list) std::cout << " " << id;
    std::cout << "\n";
  }
  return 0;
}

int cmd_eval(const Options& o) {
  memqa::Engine engine(make_config(o));
  const auto cases = memqa::load_benchmark(o.bench);
  const auto report = engine.evaluate(cases, o.generate);
  const std::string out = o.out.empty() ? "report.json" : o.out;
  write_file(out, memqa::to_json(report).dump(2) + "\n");
  if (!o.cases_out.empty()) {
    std::ofstream f(o.cases_out, std::ios::binary);
    memqa::write_case_records(report, f);
  }
  std::printf("cases %zu  recall@1 %.4f  recall@5 %.4f  ndcg@5 %.4f\n", report.n_cases, report.recall_1,
              report.recall_5, report.ndcg_5);
  if (report.a_key) std::printf("a_key %.4f\n", *report.a_key);
  return 0;
}

int cmd_train(const Options& o) {
  memqa::Engine engine(make_config(o));
  const auto data = engine.training_set(memqa::load_benchmark(o.bench));
  memqa::RankSvmOptions opts;
  opts.c_reg = o.c_reg;
  const auto r = memqa::train_weights(data, opts);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  memqa::save_weights(r.weights, o.weights_out);
  std::printf("w_t %.6f  w_r %.6f  w_l %.6f  w_s %.6f  (%zu pairs, %d iterations)\n", r.weights.w_t,
              r.weights.w_r, r.weights.w_l, r.weights.w_s, r.pairs, r.iterations);
  return 0;
}

int cmd_sft(const Options& o) {
  memqa::Engine engine(make_config(o));
  const auto examples = engine.sft(memqa::load_benchmark(o.bench), engine.config().seed);
  const std::string out = o.out.empty() ? "sft.jsonl" : o.out;
  std::ofstream f(out, std::ios::binary);
  memqa::write_sft_dataset(examples, f);
  std::cout << "wrote " << examples.size() << " examples to " << out << "\n";
  return 0;
}

int cmd_serve(const Options& o) {
  memqa::Engine engine(make_config(o));
  return memqa::serve(engine, o.host, o.port) ? 0 : 2;
}

int cmd_compact(const Options& o) {
  memqa::Engine engine(make_config(o));
  if (engine.store().path().empty()) throw memqa::Error(memqa::ErrorCode::kConfigError, "no store path");
  engine.store().compact();
  std::cout << "compacted " << engine.store().size() << " memories\n";
  return 0;
}

int cmd_gen_synth(const Options& o) {
  memqa::E2eSuiteOptions opts;
  if (o.seed_set) opts.seed = o.seed;
  opts.cases = o.cases;
  const auto suite = memqa::write_e2e_suite(o.out.empty() ? "synthetic" : o.out, opts);
  std::cout << "wrote " << suite.memory_count << " memories to " << suite.memories.string() << " and "
            << opts.cases << " cases to " << suite.benchmark.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"memqa: multimodal memory question answering"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "engine config JSON")->check(CLI::ExistingFile);
  app.add_option("--store", o.store, "memory store JSONL (overrides config)");
  app.add_option("--sidecar-root", o.sidecar_root, "use mock sidecar providers rooted here");
  app.add_option("--generator", o.generator, "generator override")->check(CLI::IsMember({"top-candidate", "none"}));
  app.add_option("--strategy", o.strategy, "reranker")->check(CLI::IsMember({"max", "sum", "learned"}));
  app.add_option("--weights", o.weights, "fusion weights JSON");
  app.add_option("--k", o.k, "retrieval depth");
  app.add_option_function<std::uint64_t>("--seed", [&](std::uint64_t s) { o.seed = s; o.seed_set = true; }, "rng seed");

  std::string memories;
  auto* ingest = app.add_subcommand("ingest", "load memories.jsonl into the store");
  ingest->add_option("file", memories, "memories.jsonl")->required()->check(CLI::ExistingFile);

  auto* augment = app.add_subcommand("augment", "augment and embed every pending memory");

  auto* query = app.add_subcommand("query", "rank memories for a question");
  query->add_option("question", o.question)->required();
  query->add_option("--asked-at", o.asked_at, "ISO-8601 instant (default: now)");
  query->add_option("--tz", o.tz, "timezone offset in minutes");
  query->add_flag("--answer", o.answer, "generate an answer from the top candidates");
  query->add_flag("--json", o.json, "print JSON");

  auto* eval = app.add_subcommand("eval", "evaluate a benchmark");
  eval->add_option("--bench", o.bench)->required()->check(CLI::ExistingFile);
  eval->add_option("--out", o.out, "report path (default report.json)");
  eval->add_option("--cases-out", o.cases_out, "per-case JSONL");
  eval->add_flag("--generate", o.generate, "also generate and score answers");

  auto* train = app.add_subcommand("train-weights", "fit fusion weights with RankSVM");
  train->add_option("--bench", o.bench)->required()->check(CLI::ExistingFile);
  train->add_option("--weights-out", o.weights_out);
  train->add_option("--c", o.c_reg, "regularization constant")->check(CLI::PositiveNumber);

  auto* sft = app.add_subcommand("sft", "build a noise-injected fine-tuning set");
  sft->add_option("--bench", o.bench)->required()->check(CLI::ExistingFile);
  sft->add_option("--out", o.out, "output JSONL (default sft.jsonl)");

  auto* serve = app.add_subcommand("serve", "start the HTTP API");
  serve->add_option("--port", o.port)->check(CLI::Range(1, 65535));
  serve->add_option("--host", o.host);

  auto* compact = app.add_subcommand("compact", "rewrite the store log");

  auto* gen = app.add_subcommand("gen-synth", "write the synthetic end-to-end suite");
  gen->add_option("--out", o.out, "output directory (default synthetic)");
  gen->add_option("--cases", o.cases)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*ingest) return cmd_ingest(o, memories);
    if (*augment) return cmd_augment(o);
    if (*query) return cmd_query(o);
    if (*eval) return cmd_eval(o);
    if (*train) return cmd_train(o);
    if (*sft) return cmd_sft(o);
    if (*serve) return cmd_serve(o);
    if (*compact) return cmd_compact(o);
    if (*gen) return cmd_gen_synth(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
