#include <cmath>
#include <fstream>

#include "helpers.hpp"
#include "memqa/backend.hpp"
#include "memqa/calendar.hpp"
#include "memqa/temporal.hpp"

using namespace memqa;

namespace {

struct Fixture {
  RecallQuery query;
  nlohmann::json expected;
};

std::vector<Fixture> fixtures() {
  std::ifstream in(testutil::data_path("fixtures/temporal_phrases.jsonl"));
  std::vector<Fixture> out;
  std::string line;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    out.push_back({{j["question"], j["asked_at"], j["tz_offset_minutes"]}, j["expected"]});
  }
  return out;
}

constexpr double kDay = 86400.0;

}  // namespace

TEST_CASE("rule parser agrees with the hand-computed fixtures") {
  const auto all = fixtures();
  REQUIRE(all.size() >= 20);
  for (const auto& f : all) {
    INFO(f.query.text);
    CHECK(nlohmann::json(to_json(parse_temporal_rules(f.query))) == f.expected);
  }
}

TEST_CASE("llm path replays the same fixtures") {
  for (const auto& f : fixtures()) {
    INFO(f.query.text);
    auto llm = std::make_shared<FunctionBackend>([&](const std::string& prompt) {
      CHECK(prompt == render_datetime_prompt(f.query));
      return "```json\n" + f.expected.dump() + "\n```";
    });
    auto out = DateParser(llm).parse(f.query);
    CHECK(out.used_llm);
    CHECK(out.warnings.empty());
    CHECK(out.parse == parse_temporal_rules(f.query));
  }
}

TEST_CASE("malformed or failing llm falls back to rules") {
  const RecallQuery q{"where did I park yesterday", 1714989600, 0};
  for (std::string reply : {"I think yesterday", R"({"search_start_date":"2024-05-05"})",
                            R"({"search_start_date":"2024-05-07","search_end_date":"2024-05-05","search_recent":false})",
                            R"({"search_start_date":"05/05/2024","search_end_date":"","search_recent":false})",
                            R"({"search_start_date":"","search_end_date":"","search_recent":"no"})"}) {
    INFO(reply);
    auto llm = std::make_shared<FunctionBackend>([&](const std::string&) { return reply; });
    auto out = DateParser(llm).parse(q);
    CHECK_FALSE(out.used_llm);
    CHECK(out.warnings.size() == 1);
    CHECK(format_date(*out.parse.start) == "2024-05-05");
  }
  auto down = std::make_shared<FunctionBackend>([](const std::string&) -> std::string {
    throw Error(ErrorCode::kTimeout, "slow");
  });
  auto out = DateParser(down).parse(q);
  CHECK_FALSE(out.used_llm);
  CHECK(out.parse.has_range());
  CHECK_FALSE(DateParser().parse(q).used_llm);
}

TEST_CASE("temporal parse json codec") {
  TemporalParse p;
  CHECK(to_json(p).dump() == R"({"search_start_date":"","search_end_date":"","search_recent":false})");
  p.start = parse_iso_date("2024-01-02");
  CHECK_THROWS_CODE(validate(p), ErrorCode::kInvalidArgument);
  p.end = parse_iso_date("2024-01-01");
  CHECK_THROWS_CODE(validate(p), ErrorCode::kInvalidArgument);
  CHECK_FALSE(temporal_parse_from_json(nlohmann::json::array()).has_value());
  CHECK_FALSE(temporal_parse_from_json(nlohmann::json{{"search_start_date", ""}, {"search_end_date", "2024-01-01"},
                                                      {"search_recent", false}})
                  .has_value());
}

TEST_CASE("recency oracle values") {
  // 40-digit closed-form evaluations from an arbitrary-precision script
  CHECK(recency_score(0.0, true) == 1.0);
  const std::pair<double, double> table[] = {
      {1, 0.9009152411548569612533551},  {3, 0.7756366828881091211381623},
      {7, 0.6677155373757775880737679},  {30, 0.5458906679491688318527823},
      {90, 0.3831173074756064543524238}, {365, 0.1284017644024391355849068},
  };
  for (auto [days, expect] : table) CHECK(std::abs(recency_score(days * kDay, true) - expect) < 1e-12);
  CHECK(recency_score(3 * kDay, false) == 0.0);
}

TEST_CASE("recency properties") {
  double prev = 2.0;
  for (double d = 0; d < 800 * kDay; d += 3.7 * kDay) {
    const double r = recency_score(d, true);
    CHECK(r > 0.0);
    CHECK(r <= 1.0);
    CHECK(r < prev);
    prev = r;
  }
  CHECK_THROWS_CODE(recency_score(-1.0, true), ErrorCode::kNegativeInterval);
  const MemoryEntry m{"m", std::nullopt, "c", 2000, ""};
  TemporalParse recent;
  recent.recent = true;
  CHECK_THROWS_CODE(recency_score(m, RecallQuery{"q", 1000, 0}, recent), ErrorCode::kNegativeInterval);
  CHECK(recency_score(m, RecallQuery{"q", 2000, 0}, recent) == 1.0);
  CHECK_THROWS_CODE(validate(DecayConstants{90 * kDay, 3 * kDay, 365 * kDay}), ErrorCode::kInvalidArgument);
}

TEST_CASE("date match uses the query timezone") {
  TemporalParse p;
  p.start = p.end = parse_iso_date("2024-05-05");
  const MemoryEntry late{"m", std::nullopt, "c", *parse_iso_instant("2024-05-06T02:00:00Z"), ""};
  CHECK(date_match_score(late, p, 0) == 0.0);
  CHECK(date_match_score(late, p, -240) == 1.0);
  CHECK(date_match_score(late, TemporalParse{}, 0) == 0.0);
}
