#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <doctest.h>

#include "memqa/error.hpp"

#define CHECK_THROWS_CODE(expr, ec)                                    \
  do {                                                                 \
    bool caught_ = false;                                              \
    try {                                                              \
      (void)(expr);                                                    \
    } catch (const memqa::Error& e_) {                                 \
      caught_ = true;                                                  \
      CHECK_MESSAGE(e_.code() == (ec), "got " << std::string(e_.what()));           \
    }                                                                  \
    CHECK_MESSAGE(caught_, "expected " << memqa::to_string(ec));       \
  } while (0)

namespace testutil {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("memqa-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::string data_path(const std::string& rel) { return std::string(MEMQA_TEST_DATA) + "/" + rel; }

}  // namespace testutil
