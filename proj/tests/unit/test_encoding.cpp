#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "memqa/encoding.hpp"

using namespace memqa;

namespace {

double norm(const Vector& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("hashing embedder matches an independent implementation") {
  // values from a separate script implementing the same hashing scheme
  CHECK(HashingEmbedder(8).embed_text("Hello, hello world") == Vector{0, 0, 0, -1, 0, 0, 0, 0});
  const double a = 0.4472135954999579;
  const Vector expect{a, -a, 0, 0, 0, 0, 0, 0, 0, 0, -a, 0, -a, 0, -a, 0};
  const Vector got = HashingEmbedder(16, true).embed_text("red car parked");
  REQUIRE(got.size() == 16);
  for (std::size_t i = 0; i < 16; ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("vectors are unit norm and deterministic") {
  HashingEmbedder e;
  CHECK(e.dim() == 256);
  const auto v = e.embed_text("a parking garage pillar with level 3");
  CHECK(norm(v) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v == e.embed_text("a parking garage pillar with level 3"));
  CHECK(similarity(v, v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unigram vectors ignore token order") {
  HashingEmbedder uni(64);
  CHECK(uni.embed_text("red car parked near oak") == uni.embed_text("oak near parked car red"));
  HashingEmbedder bi(64, true);
  CHECK(bi.embed_text("red car") != bi.embed_text("car red"));
}

TEST_CASE("empty inputs") {
  HashingEmbedder e(32);
  CHECK_THROWS_CODE(e.embed_text(" ,. "), ErrorCode::kEmptyInput);
  CHECK_THROWS_CODE(e.encode_query(RecallQuery{"", 1, 0}), ErrorCode::kInvalidArgument);
  AugmentedMemory blank;
  blank.entry.id = "x";
  CHECK_THROWS_CODE(e.encode_memory(blank), ErrorCode::kEmptyInput);
  Vector zero(4, 0.0);
  CHECK_THROWS_CODE(normalize(zero), ErrorCode::kEmptyInput);
  Vector bad{1.0, NAN};
  CHECK_THROWS_CODE(normalize(bad), ErrorCode::kInvalidArgument);
  CHECK_THROWS_CODE(HashingEmbedder(0), ErrorCode::kInvalidArgument);
}

TEST_CASE("similarity requires equal dimensions") {
  CHECK_THROWS_CODE(similarity(Vector(3, 0.0), Vector(4, 0.0)), ErrorCode::kDimensionMismatch);
  CHECK(similarity(Vector{0.6, 0.8}, Vector{0.8, 0.6}) == doctest::Approx(0.96));
}

TEST_CASE("encodable text is field prefixed and skips empty fields") {
  AugmentedMemory m{{"id", std::nullopt, "remember this", 1, "Main St"}, {"OCR", "", "rewritten"}, std::nullopt, true};
  CHECK(encodable_text(m) == "command: remember this\ncompletion: rewritten\nocr: OCR\nlocation: Main St");
  HashingEmbedder e(128);
  CHECK(e.encode_memory(m) == e.embed_text(encodable_text(m)));
}

TEST_CASE("shared vocabulary raises similarity") {
  HashingEmbedder e(256);
  const auto q = e.embed_text("which wine did I save");
  const auto wine = e.embed_text("remember this wine caption a wine bottle label");
  const auto book = e.embed_text("remember this book caption a book cover on a desk");
  CHECK(similarity(q, wine) > similarity(q, book));
}
