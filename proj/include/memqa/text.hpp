#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace memqa {

// Lowercased runs of ASCII letters/digits. Bytes >= 0x80 are kept inside
// tokens so UTF-8 words survive as single tokens.
std::vector<std::string> tokenize(std::string_view text);

// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
constexpr std::uint64_t fnv1a64(std::string_view bytes,
                                std::uint64_t basis = 14695981039346656037ULL) noexcept {
  std::uint64_t h = basis;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value);

// Extracts the first balanced {...} object from free-form model output,
// tolerating code fences and leading prose. Returns empty if none found.
std::string extract_json_object(std::string_view text);

std::string trim(std::string_view text);

}  // namespace memqa
