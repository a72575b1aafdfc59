#include "memqa/bm25.hpp"

#include <cmath>

#include "memqa/error.hpp"
#include "memqa/text.hpp"

namespace memqa {

void validate(const Bm25Params& params) {
  if (!(params.k1 > 0.0)) throw Error(ErrorCode::kInvalidArgument, "BM25 k1 must be positive");
  if (!(params.b >= 0.0 && params.b <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "BM25 b must be in [0,1]");
}

Bm25Corpus::Bm25Corpus(const std::vector<std::string>& documents, Bm25Params params)
    : params_(params) {
  validate(params_);
  docs_.reserve(documents.size());
  std::size_t total = 0;
  for (const auto& text : documents) {
    Doc doc;
    for (auto& token : tokenize(text)) {
      ++doc.tf[token];
      ++doc.length;
    }
    for (const auto& [term, count] : doc.tf) ++doc_freq_[term];
    total += doc.length;
    docs_.push_back(std::move(doc));
  }
  if (!docs_.empty()) avg_len_ = static_cast<double>(total) / static_cast<double>(docs_.size());
}

double Bm25Corpus::idf(const std::string& term) const {
  auto it = doc_freq_.find(term);
  const double n = it == doc_freq_.end() ? 0.0 : it->second;
  const double N = static_cast<double>(docs_.size());
  return std::max(0.0, std::log(1.0 + (N - n + 0.5) / (n + 0.5)));
}

double Bm25Corpus::score(std::size_t doc_index, const std::vector<std::string>& query_tokens) const {
  if (doc_index >= docs_.size()) throw Error(ErrorCode::kInvalidArgument, "BM25 document index out of range");
  const Doc& doc = docs_[doc_index];
  if (doc.length == 0 || avg_len_ == 0.0) return 0.0;
  const double norm = params_.k1 * (1.0 - params_.b + params_.b * static_cast<double>(doc.length) / avg_len_);
  double total = 0.0;
  for (const auto& term : query_tokens) {
    auto it = doc.tf.find(term);
    if (it == doc.tf.end()) continue;
    const double tf = it->second;
    total += idf(term) * tf * (params_.k1 + 1.0) / (tf + norm);
  }
  return total;
}

double Bm25Corpus::score(std::size_t doc, const std::string& query) const {
  return score(doc, tokenize(query));
}

}  // namespace memqa
