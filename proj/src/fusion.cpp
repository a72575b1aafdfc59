#include "memqa/fusion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

#include "memqa/error.hpp"
#include "memqa/text.hpp"

namespace memqa {

void validate(const FusionWeights& w) {
  const double all[] = {w.w_t, w.w_r, w.w_l, w.w_s};
  for (double v : all) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite fusion weight");
  }
  if (std::all_of(std::begin(all), std::end(all), [](double v) { return v == 0.0; })) {
    throw Error(ErrorCode::kInvalidArgument, "all fusion weights are zero");
  }
}

nlohmann::ordered_json to_json(const FusionWeights& w) {
  nlohmann::ordered_json j;
  j["w_t"] = w.w_t;
  j["w_r"] = w.w_r;
  j["w_l"] = w.w_l;
  j["w_s"] = w.w_s;
  j["trained_at"] = w.trained_at.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json(w.trained_at);
  j["c_reg"] = w.c_reg ? nlohmann::ordered_json(*w.c_reg) : nlohmann::ordered_json();
  return j;
}

FusionWeights weights_from_json(const nlohmann::json& j) {
  try {
    FusionWeights w;
    w.w_t = j.at("w_t").get<double>();
    w.w_r = j.at("w_r").get<double>();
    w.w_l = j.at("w_l").get<double>();
    w.w_s = j.at("w_s").get<double>();
    if (auto it = j.find("trained_at"); it != j.end() && it->is_string()) w.trained_at = it->get<std::string>();
    if (auto it = j.find("c_reg"); it != j.end() && it->is_number()) w.c_reg = it->get<double>();
    validate(w);
    return w;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kConfigError, std::string("bad weights JSON: ") + ex.what());
  }
}

FusionWeights load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open weights file " + path);
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kConfigError, "weights file is not JSON: " + path);
  return weights_from_json(j);
}

void save_weights(const FusionWeights& w, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << to_json(w).dump(2) << '\n';
}

double fuse(const SignalVector& s, const FusionWeights& w) {
  const double inputs[] = {s.r_t, s.r_r, s.r_l, s.r_s, w.w_t, w.w_r, w.w_l, w.w_s};
  for (double v : inputs) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteScore, "non-finite signal or weight");
  }
  return w.w_t * s.r_t + w.w_r * s.r_r + w.w_l * s.r_l + w.w_s * s.r_s;
}

void min_max_normalize(std::vector<double>& values) {
  if (values.empty()) return;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi > lo) {
    for (double& v : values) v = (v - lo) / (hi - lo);
  } else {
    for (double& v : values) v = v > 0.0 ? 1.0 : 0.0;
  }
}

std::vector<SignalVector> compute_signals(const RecallQuery& query, const std::vector<AugmentedMemory>& pool,
                                          const TemporalParse& parse, const Embedder& embedder,
                                          const SignalOptions& options) {
  if (pool.empty()) throw Error(ErrorCode::kInvalidArgument, "empty candidate pool");
  validate(query);
  validate(parse);
  validate(options.decay);

  std::vector<std::string> locations;
  locations.reserve(pool.size());
  for (const auto& m : pool) locations.push_back(m.entry.location);
  const Bm25Corpus corpus(locations, options.bm25);
  const auto query_tokens = tokenize(query.text);
  const Vector query_vec = embedder.encode_query(query);

  std::vector<SignalVector> out(pool.size());
  std::vector<double> location(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& m = pool[i];
    out[i].r_t = date_match_score(m.entry, parse, query.timezone_offset_minutes);
    out[i].r_r = recency_score(m.entry, query, parse, options.decay);
    location[i] = corpus.score(i, query_tokens);
    if (m.embedding && m.embedding->size() == embedder.dim()) {
      out[i].r_s = similarity(*m.embedding, query_vec);
    } else {
      out[i].r_s = similarity(embedder.encode_memory(m), query_vec);
    }
  }
  if (options.normalize_location) min_max_normalize(location);
  for (std::size_t i = 0; i < pool.size(); ++i) out[i].r_l = location[i];
  return out;
}

const char* to_string(RerankStrategy s) noexcept {
  switch (s) {
    case RerankStrategy::kMax: return "max";
    case RerankStrategy::kSum: return "sum";
    case RerankStrategy::kLearned: return "learned";
  }
  return "unknown";
}

RerankStrategy strategy_from_string(std::string_view name) {
  if (name == "max") return RerankStrategy::kMax;
  if (name == "sum") return RerankStrategy::kSum;
  if (name == "learned") return RerankStrategy::kLearned;
  throw Error(ErrorCode::kInvalidArgument, "unknown rerank strategy: " + std::string(name));
}

namespace {

std::array<double, 4> descending(const SignalVector& s) {
  std::array<double, 4> v = {s.r_t, s.r_r, s.r_l, s.r_s};
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

bool tie_break(const ScoredCandidate& a, const ScoredCandidate& b) {
  if (a.created_at != b.created_at) return a.created_at > b.created_at;
  return a.memory_id < b.memory_id;
}

}  // namespace

std::vector<ScoredCandidate> rerank(std::vector<ScoredCandidate> candidates, RerankStrategy strategy,
                                    const std::optional<FusionWeights>& weights) {
  switch (strategy) {
    case RerankStrategy::kLearned:
      if (!weights) throw Error(ErrorCode::kMissingWeights, "learned strategy needs fusion weights");
      for (auto& c : candidates) c.fused = fuse(c.signals, *weights);
      break;
    case RerankStrategy::kSum:
      for (auto& c : candidates) c.fused = fuse(c.signals, {1.0, 1.0, 1.0, 1.0, {}, std::nullopt});
      break;
    case RerankStrategy::kMax:
      for (auto& c : candidates) {
        const auto d = descending(c.signals);
        if (!std::isfinite(d[0]) || !std::isfinite(d[3])) {
          throw Error(ErrorCode::kNonFiniteScore, c.memory_id + ": non-finite signal");
        }
        c.fused = d[0];
      }
      break;
  }

  if (strategy == RerankStrategy::kMax) {
    std::sort(candidates.begin(), candidates.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
      const auto da = descending(a.signals);
      const auto db = descending(b.signals);
      if (da != db) return std::lexicographical_compare(db.begin(), db.end(), da.begin(), da.end());
      return tie_break(a, b);
    });
  } else {
    std::sort(candidates.begin(), candidates.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
      if (a.fused != b.fused) return a.fused > b.fused;
      return tie_break(a, b);
    });
  }
  for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i].rank = i + 1;
  return candidates;
}

std::vector<ScoredCandidate> top_k(const std::vector<ScoredCandidate>& ranked, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  const auto n = std::min(k, ranked.size());
  return {ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n)};
}

}  // namespace memqa
