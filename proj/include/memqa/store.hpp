#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "memqa/types.hpp"

namespace memqa {

// Inclusive [begin, end] window over created_at.
struct TimeWindow {
  std::int64_t begin = 0;
  std::int64_t end = 0;
};

// Append-log memory store. Every mutation is appended to a JSONL file as a
// full record; on load the last record for an id wins. Readers take a shared
// lock, writers serialize on an exclusive one.
class MemoryStore {
 public:
  // In-memory store (nothing persisted).
  explicit MemoryStore(std::size_t dim);
  // Opens (and replays) `path`, creating it lazily on first write. Refuses
  // to load records whose embedding length differs from `dim`.
  MemoryStore(std::filesystem::path path, std::size_t dim);

  MemoryStore(const MemoryStore&) = delete;
  MemoryStore& operator=(const MemoryStore&) = delete;

  std::string put(const MemoryEntry& entry);
  std::optional<AugmentedMemory> get(const std::string& id) const;
  AugmentedMemory attach_augmentation(const std::string& id, const AuxiliaryClue& clue,
                                      std::optional<Vector> embedding);

  // Sorted by (created_at, id).
  std::vector<AugmentedMemory> scan(std::optional<TimeWindow> window = std::nullopt) const;

  // Rewrites the log with one line per memory in scan order.
  void compact();

  std::size_t size() const;
  std::size_t dim() const noexcept { return dim_; }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  void load();
  void append(const AugmentedMemory& memory);
  void check_embedding(const std::optional<Vector>& embedding, const std::string& id) const;

  std::filesystem::path path_;
  std::size_t dim_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, AugmentedMemory> records_;
};

}  // namespace memqa
