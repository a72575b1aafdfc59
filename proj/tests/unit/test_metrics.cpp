#include <cmath>

#include "helpers.hpp"
#include "metric_oracles.hpp"
#include "memqa/metrics.hpp"

using namespace memqa;

namespace {

std::string join(const std::vector<std::string>& words) {
  std::string s;
  for (const auto& w : words) s += (s.empty() ? "" : " ") + w;
  return s;
}

}  // namespace

TEST_CASE("worked ndcg example") {
  CHECK(std::abs(ndcg_at_k({"p1", "n1", "p2"}, {"p1", "p2"}, 3) - 0.9197207891481876) < 1e-12);
}

TEST_CASE("recall and ndcg edge cases") {
  CHECK_THROWS_CODE(recall_at_k({"a"}, {}, 1), ErrorCode::kNoPositives);
  CHECK_THROWS_CODE(ndcg_at_k({"a"}, {}, 1), ErrorCode::kNoPositives);
  CHECK_THROWS_CODE(recall_at_k({"a"}, {"a"}, 0), ErrorCode::kInvalidArgument);
  CHECK(recall_at_k({}, {"a"}, 5) == 0.0);
  CHECK(recall_at_k({"a", "b"}, {"a", "a"}, 1) == 1.0);
  CHECK(ndcg_at_k({"a", "a", "b"}, {"a", "b"}, 3) < 1.0);
  CHECK(ndcg_at_k({"b", "a"}, {"a", "b"}, 2) == 1.0);
}

TEST_CASE("randomized ranking metrics match brute force") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 500; ++round) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<std::string> ranked;
    for (std::size_t i = 0; i < n; ++i) ranked.push_back("m" + std::to_string(i));
    for (std::size_t i = n; i > 1; --i) std::swap(ranked[i - 1], ranked[rng() % i]);
    std::vector<std::string> pos;
    for (const auto& id : ranked) {
      if (rng() % 3 == 0) pos.push_back(id);
    }
    if (pos.empty()) pos.push_back(ranked[rng() % n]);
    double prev_r = 0, prev_n = 0;
    for (std::size_t k = 1; k <= 9; ++k) {
      const double r = recall_at_k(ranked, pos, k);
      const double g = ndcg_at_k(ranked, pos, k);
      CHECK(std::abs(r - oracle::recall(ranked, pos, k)) <= 1e-9);
      CHECK(std::abs(g - oracle::ndcg(ranked, pos, k)) <= 1e-6);
      CHECK(r >= prev_r);
      prev_r = r;
      prev_n = g;
      // ndcg@k == 1 exactly when the top min(|pos|, k) slots are all positives
      bool top_all_pos = true;
      for (std::size_t i = 0; i < std::min(k, pos.size()); ++i) {
        top_all_pos = top_all_pos && std::find(pos.begin(), pos.end(), ranked[i]) != pos.end();
      }
      CHECK((std::abs(g - 1.0) < 1e-12) == top_all_pos);
    }
    (void)prev_n;
  }
}

TEST_CASE("id detection matches brute force") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 500; ++round) {
    std::vector<std::string> pred, gold;
    for (int i = 0; i < 6; ++i) {
      if (rng() % 2) pred.push_back("m" + std::to_string(i));
      if (rng() % 3 == 0) gold.push_back("m" + std::to_string(i));
    }
    if (rng() % 4 == 0 && !pred.empty()) pred.push_back(pred.front());
    const auto got = id_detection_metrics(pred, gold);
    const auto want = oracle::ids(pred, gold);
    CHECK(got.precision == want.precision);
    CHECK(got.recall == want.recall);
    CHECK(got.f1 == want.f1);
  }
  const auto none = id_detection_metrics({}, {"a"});
  CHECK(none.f1 == 0.0);
}

TEST_CASE("a_key matches brute force") {
  const auto domains = AnswerDomains::defaults();
  const std::set<std::string> colors = {"red", "blue", "green", "black"};
  const std::vector<std::string> words = {"red", "blue", "green", "black", "car", "the", "a", "bottle", "label", "big"};
  std::mt19937_64 rng(29);
  for (int round = 0; round < 500; ++round) {
    std::vector<std::string> cand, gold;
    for (std::size_t i = 0, n = rng() % 6; i < n; ++i) cand.push_back(words[rng() % words.size()]);
    for (std::size_t i = 0, n = 1 + rng() % 4; i < n; ++i) gold.push_back(words[rng() % words.size()]);
    const bool closed = rng() % 2;
    const double got = a_key(join(cand), join(gold), closed ? QuestionCategory::kColor : QuestionCategory::kOther, domains);
    CHECK(std::abs(got - oracle::a_key(cand, gold, closed ? &colors : nullptr)) <= 1e-9);
    CHECK(got >= 0.0);
    CHECK(got <= 1.0);
  }
}

TEST_CASE("a_key closed domains") {
  const auto d = AnswerDomains::defaults();
  CHECK(a_key("It is RED.", "red", QuestionCategory::kColor, d) == 1.0);
  CHECK(a_key("red and blue", "red", QuestionCategory::kColor, d) == doctest::Approx(2.0 / 3));
  CHECK(a_key("there are three", "3", QuestionCategory::kNumber, d) == 1.0);
  CHECK(a_key("twelve", "12 bottles", QuestionCategory::kNumber, d) == 1.0);
  CHECK(a_key("no, it was not", "No", QuestionCategory::kYesNo, d) == 1.0);
  CHECK(a_key("yes", "no", QuestionCategory::kYesNo, d) == 0.0);
  CHECK(a_key("round", "circle", QuestionCategory::kShape, d) == 0.0);
  // gold without a domain token falls back to keyword recall
  CHECK(a_key("the wine label", "wine label", QuestionCategory::kColor, d) == 1.0);
  CHECK_THROWS_CODE(a_key("x", " ,", QuestionCategory::kOther, d), ErrorCode::kEmptyGold);
  CHECK(a_key("the", "the", QuestionCategory::kOther, d) == 1.0);
}

TEST_CASE("category names") {
  CHECK(category_from_string("Colour") == QuestionCategory::kColor);
  CHECK(category_from_string("yes/no") == QuestionCategory::kYesNo);
  CHECK(category_from_string("whatever") == QuestionCategory::kOther);
  for (auto c : {QuestionCategory::kColor, QuestionCategory::kShape, QuestionCategory::kNumber,
                 QuestionCategory::kYesNo, QuestionCategory::kOther}) {
    CHECK(category_from_string(to_string(c)) == c);
  }
}

TEST_CASE("domains from file") {
  testutil::TempDir dir("domains");
  testutil::write_file(dir / "d.json", R"({"version":"test/2","color":["mauve"],"number_aliases":{"dozen":"12"}})");
  const auto d = AnswerDomains::from_file((dir / "d.json").string());
  CHECK(d.version() == "test/2");
  CHECK(d.restrict("mauve red", QuestionCategory::kColor) == std::set<std::string>{"mauve"});
  CHECK(d.restrict("a dozen", QuestionCategory::kNumber) == std::set<std::string>{"12"});
  CHECK(d.restrict("twelve", QuestionCategory::kNumber).empty());
  CHECK_THROWS_CODE(AnswerDomains::from_file((dir / "none.json").string()), ErrorCode::kConfigError);
}
