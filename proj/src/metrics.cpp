#include "memqa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "memqa/error.hpp"
#include "memqa/text.hpp"

namespace memqa {

namespace {

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

void check_k(std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
}

}  // namespace

double recall_at_k(const std::vector<std::string>& ranked, const std::vector<std::string>& positives,
                   std::size_t k) {
  check_k(k);
  const auto gold = as_set(positives);
  if (gold.empty()) throw Error(ErrorCode::kNoPositives, "recall needs at least one positive");
  std::set<std::string> hit;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
    if (gold.contains(ranked[i])) hit.insert(ranked[i]);
  }
  return static_cast<double>(hit.size()) / static_cast<double>(gold.size());
}

double ndcg_at_k(const std::vector<std::string>& ranked, const std::vector<std::string>& positives,
                 std::size_t k) {
  check_k(k);
  const auto gold = as_set(positives);
  if (gold.empty()) throw Error(ErrorCode::kNoPositives, "nDCG needs at least one positive");
  double dcg = 0.0;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
    if (gold.contains(ranked[i]) && seen.insert(ranked[i]).second) {
      dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
  }
  double ideal = 0.0;
  for (std::size_t i = 0; i < std::min(k, gold.size()); ++i) ideal += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / ideal;
}

IdMetrics id_detection_metrics(const std::vector<std::string>& predicted, const std::vector<std::string>& gold) {
  const auto p = as_set(predicted);
  const auto g = as_set(gold);
  std::size_t both = 0;
  for (const auto& id : p) both += g.contains(id) ? 1 : 0;
  IdMetrics m;
  m.precision = p.empty() ? (g.empty() ? 1.0 : 0.0) : static_cast<double>(both) / static_cast<double>(p.size());
  m.recall = g.empty() ? (p.empty() ? 1.0 : 0.0) : static_cast<double>(both) / static_cast<double>(g.size());
  m.f1 = (m.precision + m.recall) > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

QuestionCategory category_from_string(std::string_view name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (n == "color" || n == "colour") return QuestionCategory::kColor;
  if (n == "shape") return QuestionCategory::kShape;
  if (n == "number") return QuestionCategory::kNumber;
  if (n == "yesno" || n == "y/n" || n == "yes/no") return QuestionCategory::kYesNo;
  return QuestionCategory::kOther;
}

const char* to_string(QuestionCategory c) noexcept {
  switch (c) {
    case QuestionCategory::kColor: return "color";
    case QuestionCategory::kShape: return "shape";
    case QuestionCategory::kNumber: return "number";
    case QuestionCategory::kYesNo: return "yesno";
    case QuestionCategory::kOther: return "other";
  }
  return "other";
}

AnswerDomains AnswerDomains::defaults() {
  AnswerDomains d;
  d.version_ = "memqa-domains/1";
  d.sets_[QuestionCategory::kColor] = {
      "red",    "orange", "yellow", "green",  "blue",  "purple", "pink",  "brown", "black",
      "white",  "gray",   "grey",   "silver", "gold",  "beige",  "tan",   "navy",  "teal",
      "maroon", "violet", "cyan",   "magenta", "turquoise", "cream", "ivory", "khaki"};
  d.sets_[QuestionCategory::kShape] = {
      "circle", "circular", "round",  "square",   "rectangle", "rectangular", "triangle", "triangular",
      "oval",   "star",     "heart",  "hexagon",  "hexagonal", "octagon",     "octagonal", "diamond",
      "cylinder", "cylindrical", "cube", "sphere", "spherical", "cone", "pentagon", "crescent"};
  auto& numbers = d.sets_[QuestionCategory::kNumber];
  for (int i = 0; i <= 100; ++i) numbers.insert(std::to_string(i));
  const char* words[] = {"zero",    "one",     "two",       "three",    "four",     "five",    "six",
                         "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
                         "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen", "twenty"};
  for (int i = 0; i <= 20; ++i) d.aliases_[words[i]] = std::to_string(i);
  d.sets_[QuestionCategory::kYesNo] = {"yes", "no"};
  return d;
}

AnswerDomains AnswerDomains::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open answer domains " + path);
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::kConfigError, "answer domains must be a JSON object");
  AnswerDomains d = defaults();
  d.version_ = j.value("version", std::string("custom"));
  for (auto c : {QuestionCategory::kColor, QuestionCategory::kShape, QuestionCategory::kNumber,
                 QuestionCategory::kYesNo}) {
    if (auto it = j.find(to_string(c)); it != j.end()) {
      std::set<std::string> s;
      for (const auto& w : *it) {
        for (auto& t : tokenize(w.get<std::string>())) s.insert(t);
      }
      d.sets_[c] = std::move(s);
    }
  }
  if (auto it = j.find("number_aliases"); it != j.end()) {
    d.aliases_.clear();
    for (const auto& [k, v] : it->items()) d.aliases_[k] = v.get<std::string>();
  }
  return d;
}

std::set<std::string> AnswerDomains::restrict(std::string_view text, QuestionCategory c) const {
  std::set<std::string> out;
  auto it = sets_.find(c);
  if (it == sets_.end()) return out;
  for (auto& token : tokenize(text)) {
    if (c == QuestionCategory::kNumber) {
      if (auto a = aliases_.find(token); a != aliases_.end()) token = a->second;
    }
    if (it->second.contains(token)) out.insert(token);
  }
  return out;
}

namespace {

const std::set<std::string>& stopwords() {
  static const std::set<std::string> kStop = {"a",  "an", "the", "is", "was", "are", "were", "of", "in",
                                              "on", "at", "to",  "and", "it", "my",  "your", "i",  "you"};
  return kStop;
}

}  // namespace

double a_key(std::string_view candidate, std::string_view gold, QuestionCategory category,
             const AnswerDomains& domains) {
  const auto gold_tokens = tokenize(gold);
  if (gold_tokens.empty()) throw Error(ErrorCode::kEmptyGold, "gold answer has no keywords");

  if (domains.closed(category)) {
    const auto g = domains.restrict(gold, category);
    if (!g.empty()) {
      const auto c = domains.restrict(candidate, category);
      if (c.empty()) return 0.0;
      std::size_t both = 0;
      for (const auto& t : c) both += g.contains(t) ? 1 : 0;
      if (both == 0) return 0.0;
      const double p = static_cast<double>(both) / static_cast<double>(c.size());
      const double r = static_cast<double>(both) / static_cast<double>(g.size());
      return 2.0 * p * r / (p + r);
    }
  }

  std::set<std::string> keywords;
  for (const auto& t : gold_tokens) {
    if (!stopwords().contains(t)) keywords.insert(t);
  }
  if (keywords.empty()) keywords.insert(gold_tokens.begin(), gold_tokens.end());
  const auto cand = tokenize(candidate);
  const std::set<std::string> present(cand.begin(), cand.end());
  std::size_t hit = 0;
  for (const auto& k : keywords) hit += present.contains(k) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(keywords.size());
}

}  // namespace memqa
