#include "memqa/synthetic.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <random>

#include <json.hpp>

#include "memqa/error.hpp"

namespace memqa {

namespace {

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform(rng); }
std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
std::size_t between(std::mt19937_64& rng, std::size_t lo, std::size_t hi) { return lo + pick(rng, hi - lo + 1); }

}  // namespace

RankTrainingSet generate_signal_suite(const SignalSuiteOptions& o) {
  if (o.min_candidates < 2 || o.max_candidates < o.min_candidates) {
    throw Error(ErrorCode::kInvalidArgument, "bad candidate range");
  }
  std::mt19937_64 rng(o.seed);
  RankTrainingSet data;
  data.queries.reserve(o.queries);
  while (data.queries.size() < o.queries) {
    const std::size_t n = between(rng, o.min_candidates, o.max_candidates);
    const bool recent = uniform(rng) < 0.5;
    const bool located = uniform(rng) < 0.5;
    std::vector<LabeledSignals> group(n);
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto& s = group[i].signals;
      s.r_t = uniform(rng) < 0.3 ? 1.0 : 0.0;
      s.r_r = recent ? uniform(rng) : 0.0;
      s.r_l = located ? uniform(rng) : 0.0;
      s.r_s = uniform(rng, -0.2, 0.9);
      scores[i] = fuse(s, o.planted);
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + 2, order.end(),
                      [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    if (scores[order[0]] - scores[order[1]] < o.margin) continue;
    group[order[0]].positive = true;
    data.queries.push_back(std::move(group));
  }
  return data;
}

double recall_at_1(const RankTrainingSet& data, RerankStrategy strategy, const std::optional<FusionWeights>& weights) {
  if (data.queries.empty()) throw Error(ErrorCode::kEmptyInput, "no queries");
  std::size_t hits = 0;
  for (std::size_t q = 0; q < data.queries.size(); ++q) {
    const auto& group = data.queries[q];
    std::vector<ScoredCandidate> cands;
    cands.reserve(group.size());
    for (std::size_t i = 0; i < group.size(); ++i) {
      cands.push_back({"q" + std::to_string(q) + "_c" + std::to_string(i), static_cast<std::int64_t>(i),
                       group[i].signals, 0.0, 0});
    }
    const auto ranked = rerank(std::move(cands), strategy, weights);
    if (ranked.empty()) continue;
    const auto& top = ranked.front().memory_id;
    const std::size_t idx = std::stoul(top.substr(top.find("_c") + 2));
    if (group[idx].positive) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.queries.size());
}

namespace {

struct Topic {
  const char* name;
  const char* command;
  const char* question;
  const char* caption;
};

constexpr std::array<Topic, 6> kTopics{{
    {"parking", "remember where I park the car", "where did I park the car",
     "A parking garage pillar with a painted level and bay number."},
    {"restaurant", "remember this restaurant", "which restaurant did I save",
     "A restaurant storefront with its name on the awning."},
    {"book", "remember this book", "which book did I save", "A book cover lying on a desk."},
    {"hotel", "remember this hotel", "which hotel did I save", "A hotel lobby sign near the entrance."},
    {"wine", "remember this wine", "which wine did I save", "A wine bottle label on a shelf."},
    {"plant", "remember this plant", "which plant did I save", "A potted plant with a nursery tag."},
}};

constexpr std::array<const char*, 8> kCities{"Boston", "Seattle", "Denver", "Austin",
                                             "Chicago", "Portland", "Miami", "Phoenix"};
constexpr std::array<const char*, 10> kStreets{"Elm", "Oak", "Cedar", "Maple", "Birch",
                                               "Walnut", "Pine", "Willow", "Spruce", "Hawthorn"};

// 2024-06-03T00:00Z, a Monday.
constexpr std::int64_t kBaseDay = 1717372800;
constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kHour = 3600;

std::string code(std::mt19937_64& rng) {
  static constexpr char kAlphabet[] = "ABCDEFGHJKLMNPQRSTUVWXYZ23456789";
  std::string s(6, ' ');
  for (auto& c : s) c = kAlphabet[pick(rng, sizeof(kAlphabet) - 1)];
  return s;
}

class SuiteWriter {
 public:
  SuiteWriter(const std::filesystem::path& dir, std::ofstream& out) : dir_(dir), out_(out) {}

  std::string add(std::mt19937_64& rng, const std::string& id, const Topic& topic, std::int64_t created_at,
                  const std::string& city) {
    const std::string ocr = code(rng) + " " + code(rng);
    const std::string image_ref = "images/" + id + ".jpg";
    write(image_ref + ".ocr.txt", ocr + "\n");
    write(image_ref + ".caption.json", nlohmann::json{{"image_description", topic.caption},
                                                      {"recall_question", topic.question},
                                                      {"recall_answer", ocr}}.dump() + "\n");
    write(image_ref + ".completion.txt", std::string(topic.command) + " " + ocr + "\n");

    nlohmann::ordered_json line;
    line["id"] = id;
    line["image_ref"] = image_ref;
    line["invocation_command"] = topic.command;
    line["created_at"] = created_at;
    const auto number = between(rng, 10, 999);
    const char* street = kStreets[pick(rng, kStreets.size())];
    line["location"] = std::to_string(number) + " " + street + " Street, " + city;
    out_ << line.dump() << '\n';
    ++count_;
    return ocr;
  }

  std::size_t count() const noexcept { return count_; }

 private:
  void write(const std::string& rel, const std::string& content) {
    std::ofstream f(dir_ / rel, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIoError, "cannot write " + (dir_ / rel).string());
    f << content;
  }

  std::filesystem::path dir_;
  std::ofstream& out_;
  std::size_t count_ = 0;
};

}  // namespace

E2eSuite write_e2e_suite(const std::filesystem::path& dir, const E2eSuiteOptions& o) {
  if (o.max_fillers < o.min_fillers) throw Error(ErrorCode::kInvalidArgument, "bad filler range");
  std::filesystem::create_directories(dir / "images");
  E2eSuite suite{dir, dir / "memories.jsonl", dir / "bench.jsonl", 0, {}};
  std::ofstream mem(suite.memories, std::ios::binary);
  std::ofstream bench(suite.benchmark, std::ios::binary);
  if (!mem || !bench) throw Error(ErrorCode::kIoError, "cannot write suite under " + dir.string());
  SuiteWriter writer(dir, mem);
  std::mt19937_64 rng(o.seed);

  auto at = [&](std::int64_t day, std::int64_t lo_hour, std::int64_t hi_hour) {
    return day + static_cast<std::int64_t>(between(rng, lo_hour * 60, hi_hour * 60 - 1)) * 60;
  };

  for (std::size_t i = 0; i < o.cases; ++i) {
    const int kind = static_cast<int>(i % 3);
    const std::int64_t day_index = static_cast<std::int64_t>(i % 35);
    const std::int64_t today = kBaseDay + day_index * kDay;
    const std::int64_t asked_at = today + 18 * kHour;
    const std::int64_t weekday = day_index % 7;  // 0 = Monday
    const std::int64_t this_monday = today - weekday * kDay;

    const std::size_t t = pick(rng, kTopics.size());
    const Topic& topic = kTopics[t];
    static constexpr const char* kPrefix[] = {"yday", "lweek", "loc"};
    char qid[32];
    std::snprintf(qid, sizeof qid, "%s-%04zu", kPrefix[kind], i);
    const std::string base = "m" + std::to_string(i) + "_";

    std::vector<std::string> ids;
    std::string gold;
    std::string question = topic.question;
    const std::string home = kCities[pick(rng, kCities.size())];

    if (kind == 0) {
      gold = writer.add(rng, base + "pos", topic, at(today - kDay, 8, 22), home);
      writer.add(rng, base + "d0", topic, at(today, 7, 17), home);
      writer.add(rng, base + "d1", topic, at(today - static_cast<std::int64_t>(between(rng, 2, 20)) * kDay, 8, 22), home);
      writer.add(rng, base + "d2", topic, at(today - static_cast<std::int64_t>(between(rng, 2, 20)) * kDay, 8, 22), home);
      question += " yesterday";
    } else if (kind == 1) {
      const std::int64_t last_monday = this_monday - 7 * kDay;
      gold = writer.add(rng, base + "pos", topic, at(last_monday + static_cast<std::int64_t>(pick(rng, 7)) * kDay, 8, 22), home);
      writer.add(rng, base + "d0", topic,
                 at(this_monday + static_cast<std::int64_t>(between(rng, 0, static_cast<std::size_t>(weekday))) * kDay, 7, 17),
                 home);
      writer.add(rng, base + "d1", topic, at(last_monday - static_cast<std::int64_t>(between(rng, 1, 30)) * kDay, 8, 22), home);
      writer.add(rng, base + "d2", topic, at(last_monday - static_cast<std::int64_t>(between(rng, 1, 30)) * kDay, 8, 22), home);
      question += " last week";
    } else {
      std::vector<std::size_t> cities(kCities.size());
      for (std::size_t c = 0; c < cities.size(); ++c) cities[c] = c;
      for (std::size_t c = cities.size(); c > 1; --c) std::swap(cities[c - 1], cities[pick(rng, c)]);
      gold = writer.add(rng, base + "pos", topic, at(today - static_cast<std::int64_t>(between(rng, 1, 40)) * kDay, 8, 22),
                        kCities[cities[0]]);
      for (int d = 0; d < 3; ++d) {
        writer.add(rng, base + "d" + std::to_string(d), topic,
                   at(today - static_cast<std::int64_t>(between(rng, 1, 40)) * kDay, 8, 22), kCities[cities[1 + d]]);
      }
      question += std::string(" in ") + kCities[cities[0]];
    }
    for (const char* s : {"pos", "d0", "d1", "d2"}) ids.push_back(base + s);

    const std::size_t fillers = between(rng, o.min_fillers, o.max_fillers);
    for (std::size_t f = 0; f < fillers; ++f) {
      std::size_t other = pick(rng, kTopics.size() - 1);
      if (other >= t) ++other;
      const std::string id = base + "f" + std::to_string(f);
      const std::int64_t when = at(today - static_cast<std::int64_t>(between(rng, 1, 60)) * kDay, 8, 22);
      writer.add(rng, id, kTopics[other], when, kCities[pick(rng, kCities.size())]);
      ids.push_back(id);
    }
    for (std::size_t k = ids.size(); k > 1; --k) std::swap(ids[k - 1], ids[pick(rng, k)]);

    nlohmann::ordered_json c;
    c["question_id"] = qid;
    c["question"] = question;
    c["query_time"] = asked_at;
    c["candidate_ids"] = ids;
    c["positive_ids"] = {base + "pos"};
    c["gold_answer"] = gold;
    c["category"] = "other";
    bench << c.dump() << '\n';
    if (kind != 2) suite.temporal_ids.emplace_back(qid);
  }
  suite.memory_count = writer.count();
  return suite;
}

}  // namespace memqa
