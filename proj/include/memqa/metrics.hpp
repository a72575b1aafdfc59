#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace memqa {

// |positives within the first k| / |positives|. Throws kNoPositives.
double recall_at_k(const std::vector<std::string>& ranked, const std::vector<std::string>& positives,
                   std::size_t k);

// Binary-gain nDCG: rank r contributes 1/log2(r+1); normalized by the ideal
// DCG of min(|positives|, k) hits. Throws kNoPositives.
double ndcg_at_k(const std::vector<std::string>& ranked, const std::vector<std::string>& positives,
                 std::size_t k);

struct IdMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Set precision/recall/F1 of predicted positive ids. An empty prediction
// against a non-empty gold set scores (0, 0, 0); both empty scores (1, 1, 1).
IdMetrics id_detection_metrics(const std::vector<std::string>& predicted, const std::vector<std::string>& gold);

enum class QuestionCategory { kColor, kShape, kNumber, kYesNo, kOther };

QuestionCategory category_from_string(std::string_view name);
const char* to_string(QuestionCategory c) noexcept;

// Closed answer vocabularies per question category. The defaults are a
// reconstruction (common colors, shapes, number words and digits, yes/no).
class AnswerDomains {
 public:
  static AnswerDomains defaults();
  // {"version": "...", "color": [...], "shape": [...], "number": [...],
  //  "yesno": [...], "number_aliases": {"two": "2", ...}}
  static AnswerDomains from_file(const std::string& path);

  bool closed(QuestionCategory c) const noexcept { return c != QuestionCategory::kOther; }
  // Tokens of `text` that belong to the category's domain, after aliasing.
  std::set<std::string> restrict(std::string_view text, QuestionCategory c) const;
  const std::string& version() const noexcept { return version_; }

 private:
  std::string version_;
  std::map<QuestionCategory, std::set<std::string>> sets_;
  std::map<std::string, std::string> aliases_;
};

// Keyword-overlap accuracy. Closed categories: F1 between the candidate's and
// the gold answer's domain tokens. Other (and closed categories whose gold
// has no domain token): fraction of gold keywords present in the candidate.
// Throws kEmptyGold when the gold answer has no tokens.
double a_key(std::string_view candidate, std::string_view gold, QuestionCategory category,
             const AnswerDomains& domains);

}  // namespace memqa
