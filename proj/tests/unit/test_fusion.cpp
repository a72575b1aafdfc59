#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "memqa/calendar.hpp"
#include "memqa/encoding.hpp"
#include "memqa/fusion.hpp"
#include "memqa/retrieval.hpp"

using namespace memqa;
using testutil::unit;

namespace {

std::vector<ScoredCandidate> random_pool(std::mt19937_64& rng, std::size_t n) {
  std::vector<ScoredCandidate> pool;
  for (std::size_t i = 0; i < n; ++i) {
    SignalVector s{unit(rng) < 0.3 ? 1.0 : 0.0, unit(rng), unit(rng), unit(rng) * 1.1 - 0.2};
    pool.push_back({"c" + std::to_string(i), static_cast<std::int64_t>(rng() % 5), s, 0.0, 0});
  }
  return pool;
}

std::vector<std::string> ids(const std::vector<ScoredCandidate>& ranked) {
  std::vector<std::string> out;
  for (const auto& c : ranked) out.push_back(c.memory_id);
  return out;
}

}  // namespace

TEST_CASE("published weights fuse the all-ones signal to 0.99") {
  const auto w = FusionWeights::published();
  CHECK(std::abs(fuse({1, 1, 1, 1}, w) - 0.99) <= 1e-12);
  CHECK(fuse({0, 0, 0, 0}, w) == 0.0);
  CHECK(fuse({1, 0, 0, 0}, w) == 0.08);
}

TEST_CASE("fuse rejects non-finite input") {
  CHECK_THROWS_CODE(fuse({NAN, 0, 0, 0}, FusionWeights::published()), ErrorCode::kNonFiniteScore);
  CHECK_THROWS_CODE(fuse({0, 0, 0, 0}, {INFINITY, 0, 0, 1, {}, {}}), ErrorCode::kNonFiniteScore);
}

TEST_CASE("weights validation and json round trip") {
  CHECK_THROWS_CODE(validate(FusionWeights{}), ErrorCode::kInvalidArgument);
  CHECK_THROWS_CODE(validate(FusionWeights{NAN, 0, 0, 1, {}, {}}), ErrorCode::kInvalidArgument);
  testutil::TempDir dir("weights");
  FusionWeights w{0.1, 0.2, 0.3, 0.4, "2024-01-01", 1.0};
  save_weights(w, (dir / "w.json").string());
  const auto back = load_weights((dir / "w.json").string());
  CHECK(back.w_t == 0.1);
  CHECK(back.w_s == 0.4);
  CHECK(back.trained_at == "2024-01-01");
  CHECK(back.c_reg == 1.0);
  CHECK_THROWS_CODE(weights_from_json(nlohmann::json{{"w_t", 1}}), ErrorCode::kConfigError);
  CHECK_THROWS_CODE(load_weights((dir / "missing.json").string()), ErrorCode::kConfigError);
}

TEST_CASE("similarity-only weights reproduce similarity ranking") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 50; ++round) {
    auto pool = random_pool(rng, 1 + rng() % 30);
    auto by_sim = pool;
    std::sort(by_sim.begin(), by_sim.end(), [](const auto& a, const auto& b) {
      if (a.signals.r_s != b.signals.r_s) return a.signals.r_s > b.signals.r_s;
      if (a.created_at != b.created_at) return a.created_at > b.created_at;
      return a.memory_id < b.memory_id;
    });
    CHECK(ids(rerank(pool, RerankStrategy::kLearned, FusionWeights{0, 0, 0, 1, {}, {}})) == ids(by_sim));
  }
}

TEST_CASE("positive scaling leaves the order unchanged") {
  std::mt19937_64 rng(6);
  for (int round = 0; round < 100; ++round) {
    auto pool = random_pool(rng, 2 + rng() % 40);
    FusionWeights w{unit(rng), unit(rng), unit(rng), unit(rng) + 0.01, {}, {}};
    const double c = std::exp(unit(rng) * 10 - 5);
    FusionWeights scaled{w.w_t * c, w.w_r * c, w.w_l * c, w.w_s * c, {}, {}};
    CHECK(ids(rerank(pool, RerankStrategy::kLearned, w)) == ids(rerank(pool, RerankStrategy::kLearned, scaled)));
  }
}

TEST_CASE("tie break: created_at descending then id") {
  std::vector<ScoredCandidate> pool{
      {"b", 5, {0, 0, 0, 0.5}, 0, 0}, {"a", 5, {0, 0, 0, 0.5}, 0, 0}, {"c", 9, {0, 0, 0, 0.5}, 0, 0}};
  for (auto s : {RerankStrategy::kSum, RerankStrategy::kMax}) {
    const auto r = rerank(pool, s);
    CHECK(ids(r) == std::vector<std::string>{"c", "a", "b"});
    CHECK(r[0].rank == 1);
    CHECK(r[2].rank == 3);
  }
}

TEST_CASE("max strategy compares sorted signals lexicographically") {
  std::vector<ScoredCandidate> pool{
      {"x", 1, {1, 0, 0, 0.2}, 0, 0}, {"y", 1, {1, 0, 0.3, 0}, 0, 0}, {"z", 1, {0, 0.9, 0.9, 0.9}, 0, 0}};
  CHECK(ids(rerank(pool, RerankStrategy::kMax)) == std::vector<std::string>{"y", "x", "z"});
  CHECK(ids(rerank(pool, RerankStrategy::kSum)) == std::vector<std::string>{"z", "y", "x"});
  CHECK_THROWS_CODE(rerank(pool, RerankStrategy::kLearned), ErrorCode::kMissingWeights);
}

TEST_CASE("strategy names and top_k") {
  for (auto s : {RerankStrategy::kMax, RerankStrategy::kSum, RerankStrategy::kLearned}) {
    CHECK(strategy_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_CODE(strategy_from_string("median"), ErrorCode::kInvalidArgument);
  std::mt19937_64 rng(1);
  const auto ranked = rerank(random_pool(rng, 4), RerankStrategy::kSum);
  CHECK(top_k(ranked, 2).size() == 2);
  CHECK(top_k(ranked, 10).size() == 4);
  CHECK_THROWS_CODE(top_k(ranked, 0), ErrorCode::kInvalidArgument);
}

TEST_CASE("min-max normalization") {
  std::vector<double> v{2, 4, 3};
  min_max_normalize(v);
  CHECK(v == std::vector<double>{0, 1, 0.5});
  std::vector<double> same{0.7, 0.7};
  min_max_normalize(same);
  CHECK(same == std::vector<double>{1, 1});
  std::vector<double> zeros{0, 0};
  min_max_normalize(zeros);
  CHECK(zeros == std::vector<double>{0, 0});
  std::vector<double> none;
  min_max_normalize(none);
  CHECK(none.empty());
}

TEST_CASE("compute_signals on a small pool") {
  HashingEmbedder emb(128);
  const std::int64_t now = *parse_iso_instant("2024-05-06T18:00:00Z");
  auto mem = [&](const std::string& id, std::int64_t t, const std::string& loc, const std::string& cmd) {
    AugmentedMemory m{{id, std::nullopt, cmd, t, loc}, {}, std::nullopt, false};
    return m;
  };
  std::vector<AugmentedMemory> pool{
      mem("a", now - 86400, "12 Elm Street, Boston", "remember this wine"),
      mem("b", now - 3 * 86400, "5 Oak Street, Seattle", "remember this wine"),
      mem("c", now - 3600, "9 Pine Street, Boston", "remember this book"),
  };
  const RecallQuery q{"which wine did I save in Boston yesterday", now, 0};
  TemporalParse p;
  p.start = p.end = parse_iso_date("2024-05-05");
  const auto s = compute_signals(q, pool, p, emb);
  REQUIRE(s.size() == 3);
  CHECK(s[0].r_t == 1.0);
  CHECK(s[1].r_t == 0.0);
  CHECK(s[0].r_r == 0.0);
  CHECK(s[0].r_l == 1.0);
  CHECK(s[1].r_l == 0.0);
  CHECK(s[2].r_l == 1.0);
  CHECK(s[0].r_s > s[2].r_s);
  // stored embeddings are used as-is
  pool[1].embedding = emb.encode_query(q);
  CHECK(compute_signals(q, pool, p, emb)[1].r_s == doctest::Approx(1.0));
  CHECK_THROWS_CODE(compute_signals(q, {}, p, emb), ErrorCode::kInvalidArgument);
  p.recent = true;
  CHECK(compute_signals(q, pool, p, emb)[2].r_r > compute_signals(q, pool, p, emb)[0].r_r);
}

TEST_CASE("retriever drops memories newer than the query") {
  auto emb = std::make_shared<HashingEmbedder>(64);
  Retriever r(emb, DateParser(), RetrieverConfig{});
  std::vector<AugmentedMemory> pool{{{"old", std::nullopt, "remember", 100, ""}, {}, std::nullopt, false},
                                    {{"new", std::nullopt, "remember", 300, ""}, {}, std::nullopt, false}};
  auto res = r.retrieve(RecallQuery{"remember", 200, 0}, pool);
  REQUIRE(res.ranked.size() == 1);
  CHECK(res.ranked[0].memory_id == "old");
  CHECK(res.warnings.size() == 1);
  CHECK(r.retrieve(RecallQuery{"remember", 50, 0}, pool).ranked.empty());
  RetrieverConfig bad;
  bad.weights.reset();
  CHECK_THROWS_CODE(Retriever(emb, DateParser(), bad), ErrorCode::kMissingWeights);
}
