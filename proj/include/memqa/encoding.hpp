#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "memqa/backend.hpp"
#include "memqa/types.hpp"

namespace memqa {

// Field-prefixed text for F(C, X, L): command, completion, caption, OCR and
// location, in that order, one "name: value" line per non-empty field.
std::string encodable_text(const AugmentedMemory& memory);

// Scales `v` to unit L2 norm. Throws kEmptyInput for a zero vector and
// kInvalidArgument for non-finite values.
void normalize(Vector& v);

// R_s: plain dot product (cosine for unit vectors).
double similarity(const Vector& a, const Vector& b);

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  // Both return unit-norm vectors of dim() values.
  virtual Vector encode_memory(const AugmentedMemory& memory) const = 0;
  virtual Vector encode_query(const RecallQuery& query) const = 0;
};

// Signed feature hashing of lowercased alphanumeric tokens. Unigrams by
// default, bigrams opt-in.
class HashingEmbedder final : public Embedder {
 public:
  explicit HashingEmbedder(std::size_t dim = 256, bool bigrams = false);

  std::size_t dim() const override { return dim_; }
  Vector encode_memory(const AugmentedMemory& memory) const override;
  Vector encode_query(const RecallQuery& query) const override;
  Vector embed_text(std::string_view text) const;

 private:
  std::size_t dim_;
  bool bigrams_;
};

// Contract: GET /meta -> {"dim"}; POST {"texts","image_refs"} -> {"vectors"}.
class HttpEmbedder final : public Embedder {
 public:
  // Queries /meta for the dimension.
  explicit HttpEmbedder(HttpEndpoint endpoint);
  HttpEmbedder(HttpEndpoint endpoint, std::size_t dim);

  std::size_t dim() const override { return dim_; }
  Vector encode_memory(const AugmentedMemory& memory) const override;
  Vector encode_query(const RecallQuery& query) const override;

 private:
  Vector request(const std::string& text, const std::optional<std::string>& image_ref) const;

  HttpEndpoint endpoint_;
  std::size_t dim_ = 0;
};

}  // namespace memqa
