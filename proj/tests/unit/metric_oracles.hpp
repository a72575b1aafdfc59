#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "memqa/metrics.hpp"

// Brute-force reference metrics, written without sharing code with the
// library.
namespace oracle {

inline double recall(const std::vector<std::string>& ranked, const std::vector<std::string>& pos, std::size_t k) {
  std::vector<std::string> uniq;
  for (const auto& p : pos) {
    if (std::find(uniq.begin(), uniq.end(), p) == uniq.end()) uniq.push_back(p);
  }
  int found = 0;
  for (const auto& p : uniq) {
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
      if (ranked[i] == p) {
        ++found;
        break;
      }
    }
  }
  return static_cast<double>(found) / static_cast<double>(uniq.size());
}

inline double dcg(const std::vector<std::string>& ranked, const std::vector<std::string>& pos, std::size_t k) {
  double total = 0;
  std::vector<std::string> credited;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) {
    const bool rel = std::find(pos.begin(), pos.end(), ranked[i]) != pos.end();
    const bool dup = std::find(credited.begin(), credited.end(), ranked[i]) != credited.end();
    if (rel && !dup) {
      total += 1.0 / std::log2(static_cast<double>(i + 2));
      credited.push_back(ranked[i]);
    }
  }
  return total;
}

// Ideal DCG by trying every ordering of the ranked list.
inline double ndcg(const std::vector<std::string>& ranked, const std::vector<std::string>& pos, std::size_t k) {
  std::vector<std::string> perm = ranked;
  std::sort(perm.begin(), perm.end());
  double best = 0;
  do {
    best = std::max(best, dcg(perm, pos, k));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return dcg(ranked, pos, k) / best;
}

inline memqa::IdMetrics ids(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  std::set<std::string> p(pred.begin(), pred.end()), g(gold.begin(), gold.end());
  if (p.empty() && g.empty()) return {1, 1, 1};
  double tp = 0;
  for (const auto& x : p) tp += g.count(x);
  const double prec = p.empty() ? 0 : tp / static_cast<double>(p.size());
  const double rec = g.empty() ? 0 : tp / static_cast<double>(g.size());
  return {prec, rec, prec + rec == 0 ? 0 : 2 * prec * rec / (prec + rec)};
}

// Keyword accuracy over whitespace-separated lowercase words, with the domain
// given explicitly.
inline double a_key(const std::vector<std::string>& cand, const std::vector<std::string>& gold,
                    const std::set<std::string>* domain) {
  static const std::set<std::string> stop = {"a",  "an", "the", "is", "was", "are", "were", "of", "in",
                                             "on", "at", "to",  "and", "it", "my",  "your", "i",  "you"};
  if (domain) {
    std::set<std::string> g, c;
    for (const auto& w : gold) {
      if (domain->count(w)) g.insert(w);
    }
    for (const auto& w : cand) {
      if (domain->count(w)) c.insert(w);
    }
    if (!g.empty()) {
      double tp = 0;
      for (const auto& w : c) tp += g.count(w);
      if (tp == 0) return 0;
      const double p = tp / static_cast<double>(c.size()), r = tp / static_cast<double>(g.size());
      return 2 * p * r / (p + r);
    }
  }
  std::set<std::string> keys;
  for (const auto& w : gold) {
    if (!stop.count(w)) keys.insert(w);
  }
  if (keys.empty()) keys.insert(gold.begin(), gold.end());
  double hit = 0;
  for (const auto& k : keys) hit += std::find(cand.begin(), cand.end(), k) != cand.end() ? 1 : 0;
  return hit / static_cast<double>(keys.size());
}

}  // namespace oracle
