#include "memqa/encoding.hpp"

#include <cmath>

#include "memqa/error.hpp"
#include "memqa/text.hpp"

namespace memqa {

std::string encodable_text(const AugmentedMemory& memory) {
  const std::pair<const char*, const std::string*> fields[] = {
      {"command", &memory.entry.invocation_command},
      {"completion", &memory.clue.invocation_completion},
      {"caption", &memory.clue.image_caption},
      {"ocr", &memory.clue.ocr_text},
      {"location", &memory.entry.location},
  };
  std::string out;
  for (const auto& [name, value] : fields) {
    if (value->empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += name;
    out += ": ";
    out += *value;
  }
  return out;
}

void normalize(Vector& v) {
  double sq = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "non-finite embedding value");
    sq += x * x;
  }
  if (sq == 0.0) throw Error(ErrorCode::kEmptyInput, "zero embedding");
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
}

double similarity(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return dot;
}

HashingEmbedder::HashingEmbedder(std::size_t dim, bool bigrams) : dim_(dim), bigrams_(bigrams) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
}

Vector HashingEmbedder::embed_text(std::string_view text) const {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw Error(ErrorCode::kEmptyInput, "no tokens to embed");
  Vector v(dim_, 0.0);
  auto add = [&](std::string_view feature) {
    const std::uint64_t h = fnv1a64(feature);
    v[h % dim_] += (h >> 63) ? -1.0 : 1.0;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    add(tokens[i]);
    if (bigrams_ && i + 1 < tokens.size()) add(tokens[i] + ' ' + tokens[i + 1]);
  }
  normalize(v);
  return v;
}

Vector HashingEmbedder::encode_memory(const AugmentedMemory& memory) const {
  const std::string text = encodable_text(memory);
  if (text.empty()) {
    throw Error(ErrorCode::kEmptyInput, memory.entry.id + ": no text fields to embed");
  }
  return embed_text(text);
}

Vector HashingEmbedder::encode_query(const RecallQuery& query) const {
  if (query.text.empty()) throw Error(ErrorCode::kInvalidArgument, "empty query text");
  return embed_text(query.text);
}

HttpEmbedder::HttpEmbedder(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {
  const auto meta = get_json(endpoint_, "/meta", ErrorCode::kEncoderUnavailable);
  if (!meta.contains("dim") || !meta["dim"].is_number_unsigned() || meta["dim"].get<std::size_t>() == 0) {
    throw Error(ErrorCode::kEncoderUnavailable, "encoder /meta lacks a positive \"dim\"");
  }
  dim_ = meta["dim"].get<std::size_t>();
}

HttpEmbedder::HttpEmbedder(HttpEndpoint endpoint, std::size_t dim)
    : endpoint_(std::move(endpoint)), dim_(dim) {}

Vector HttpEmbedder::request(const std::string& text, const std::optional<std::string>& image_ref) const {
  nlohmann::json body;
  body["texts"] = nlohmann::json::array({text});
  body["image_refs"] = nlohmann::json::array({image_ref ? nlohmann::json(*image_ref) : nlohmann::json()});
  nlohmann::json reply;
  try {
    reply = post_json(endpoint_, body, ErrorCode::kEncoderUnavailable);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTimeout) throw Error(ErrorCode::kEncoderUnavailable, e.what());
    throw;
  }
  try {
    Vector v = reply.at("vectors").at(0).get<Vector>();
    if (v.size() != dim_) {
      throw Error(ErrorCode::kDimensionMismatch, "encoder returned " + std::to_string(v.size()) +
                                                     " values, expected " + std::to_string(dim_));
    }
    normalize(v);
    return v;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kEncoderUnavailable, std::string("malformed encoder reply: ") + ex.what());
  }
}

Vector HttpEmbedder::encode_memory(const AugmentedMemory& memory) const {
  const std::string text = encodable_text(memory);
  if (text.empty() && (!memory.entry.image_ref || memory.entry.image_ref->empty())) {
    throw Error(ErrorCode::kEmptyInput, memory.entry.id + ": nothing to embed");
  }
  return request(text, memory.entry.image_ref);
}

Vector HttpEmbedder::encode_query(const RecallQuery& query) const {
  if (query.text.empty()) throw Error(ErrorCode::kInvalidArgument, "empty query text");
  return request(query.text, std::nullopt);
}

}  // namespace memqa
