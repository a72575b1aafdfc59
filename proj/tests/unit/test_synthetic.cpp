#include <fstream>
#include <set>

#include "helpers.hpp"
#include "memqa/benchmark.hpp"
#include "memqa/synthetic.hpp"
#include "memqa/types.hpp"

using namespace memqa;

TEST_CASE("signal suite shape") {
  SignalSuiteOptions o;
  o.queries = 100;
  const auto data = generate_signal_suite(o);
  REQUIRE(data.queries.size() == 100);
  for (const auto& g : data.queries) {
    CHECK(g.size() >= 10);
    CHECK(g.size() <= 50);
    std::size_t positives = 0;
    double best = -1e9, second = -1e9;
    for (const auto& item : g) {
      const double s = fuse(item.signals, o.planted);
      if (item.positive) {
        ++positives;
        best = s;
      } else {
        second = std::max(second, s);
      }
      CHECK((item.signals.r_t == 0.0 || item.signals.r_t == 1.0));
      CHECK(item.signals.r_s >= -0.2);
      CHECK(item.signals.r_s <= 0.9);
    }
    CHECK(positives == 1);
    CHECK(best - second >= o.margin);
  }
  CHECK(recall_at_1(data, RerankStrategy::kLearned, o.planted) == 1.0);
  CHECK_THROWS_CODE(recall_at_1(RankTrainingSet{}, RerankStrategy::kSum), ErrorCode::kEmptyInput);
}

TEST_CASE("signal suite is seeded") {
  SignalSuiteOptions o;
  o.queries = 20;
  const auto a = generate_signal_suite(o);
  const auto b = generate_signal_suite(o);
  REQUIRE(a.queries.size() == b.queries.size());
  for (std::size_t q = 0; q < a.queries.size(); ++q) {
    REQUIRE(a.queries[q].size() == b.queries[q].size());
    for (std::size_t i = 0; i < a.queries[q].size(); ++i) CHECK(a.queries[q][i].signals == b.queries[q][i].signals);
  }
}

TEST_CASE("e2e suite files") {
  testutil::TempDir dir("e2e");
  E2eSuiteOptions o;
  o.cases = 30;
  const auto suite = write_e2e_suite(dir.path(), o);
  const auto cases = load_benchmark(suite.benchmark.string());
  CHECK(cases.size() == 30);
  CHECK(suite.temporal_ids.size() == 20);

  std::map<std::string, MemoryEntry> memories;
  std::ifstream in(suite.memories);
  std::string line;
  while (std::getline(in, line)) {
    auto e = entry_from_json(nlohmann::json::parse(line));
    CHECK(std::filesystem::exists(dir.path() / (*e.image_ref + ".caption.json")));
    CHECK(std::filesystem::exists(dir.path() / (*e.image_ref + ".ocr.txt")));
    memories.emplace(e.id, e);
  }
  CHECK(memories.size() == suite.memory_count);
  for (const auto& c : cases) {
    CHECK(c.candidate_ids.size() >= 10);
    CHECK(c.candidate_ids.size() <= 50);
    CHECK(c.positive_ids.size() == 1);
    for (const auto& id : c.candidate_ids) {
      REQUIRE(memories.contains(id));
      CHECK(memories[id].created_at <= c.query_time);
    }
    const auto ocr = testutil::read_file(dir.path() / (*memories[c.positive_ids[0]].image_ref + ".ocr.txt"));
    CHECK(ocr == c.gold_answer + "\n");
  }

  testutil::TempDir again("e2e-again");
  write_e2e_suite(again.path(), o);
  CHECK(testutil::read_file(again / "bench.jsonl") == testutil::read_file(suite.benchmark));
  CHECK(testutil::read_file(again / "memories.jsonl") == testutil::read_file(suite.memories));
}
