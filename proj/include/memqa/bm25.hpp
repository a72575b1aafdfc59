#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

namespace memqa {

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

void validate(const Bm25Params& params);

// Okapi BM25 over a fixed document set. Corpus statistics are computed once
// at construction; the object is immutable afterwards.
//
//   idf(t)   = ln(1 + (N - n_t + 0.5) / (n_t + 0.5))
//   score    = sum over query tokens of idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl))
class Bm25Corpus {
 public:
  Bm25Corpus(const std::vector<std::string>& documents, Bm25Params params = {});

  double score(std::size_t doc, const std::vector<std::string>& query_tokens) const;
  double score(std::size_t doc, const std::string& query) const;

  double idf(const std::string& term) const;
  std::size_t size() const noexcept { return docs_.size(); }
  double average_length() const noexcept { return avg_len_; }

 private:
  struct Doc {
    std::unordered_map<std::string, int> tf;
    std::size_t length = 0;
  };
  Bm25Params params_;
  std::vector<Doc> docs_;
  std::unordered_map<std::string, int> doc_freq_;
  double avg_len_ = 0.0;
};

}  // namespace memqa
