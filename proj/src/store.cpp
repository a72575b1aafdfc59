#include "memqa/store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>

#include "memqa/error.hpp"

namespace memqa {

MemoryStore::MemoryStore(std::size_t dim) : dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
}

MemoryStore::MemoryStore(std::filesystem::path path, std::size_t dim)
    : path_(std::move(path)), dim_(dim) {
  if (dim_ == 0) throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  load();
}

void MemoryStore::check_embedding(const std::optional<Vector>& embedding,
                                  const std::string& id) const {
  if (!embedding) return;
  if (embedding->size() != dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                id + ": embedding has " + std::to_string(embedding->size()) +
                    " values, store expects " + std::to_string(dim_));
  }
  double sq = 0.0;
  for (double v : *embedding) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, id + ": non-finite embedding");
    sq += v * v;
  }
  const double norm = std::sqrt(sq);
  if (norm < 1.0 - 1e-6 || norm > 1.0 + 1e-6) {
    throw Error(ErrorCode::kInvalidArgument, id + ": embedding is not unit norm");
  }
}

void MemoryStore::load() {
  if (path_.empty() || !std::filesystem::exists(path_)) return;
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path_.string());
  const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string line = content.substr(pos, terminated ? nl - pos : std::string::npos);
    pos = terminated ? nl + 1 : content.size();
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) {
      // A torn final write (no trailing newline) is dropped; anything else is corruption.
      if (!terminated) break;
      throw Error(ErrorCode::kCorruptStore,
                  path_.string() + ":" + std::to_string(line_no) + ": invalid JSON");
    }
    AugmentedMemory m = memory_from_json(j);
    validate(m.entry);
    check_embedding(m.embedding, m.entry.id);
    records_.insert_or_assign(m.entry.id, std::move(m));
  }
}

void MemoryStore::append(const AugmentedMemory& memory) {
  if (path_.empty()) return;
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIoError, "cannot append to " + path_.string());
  out << to_json_line(memory).dump() << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path_.string());
}

std::string MemoryStore::put(const MemoryEntry& entry) {
  validate(entry);
  std::unique_lock lock(mutex_);
  if (records_.contains(entry.id)) throw Error(ErrorCode::kDuplicateId, entry.id);
  AugmentedMemory m;
  m.entry = entry;
  append(m);
  records_.emplace(entry.id, std::move(m));
  return entry.id;
}

std::optional<AugmentedMemory> MemoryStore::get(const std::string& id) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

AugmentedMemory MemoryStore::attach_augmentation(const std::string& id, const AuxiliaryClue& clue,
                                                 std::optional<Vector> embedding) {
  std::unique_lock lock(mutex_);
  auto it = records_.find(id);
  if (it == records_.end()) throw Error(ErrorCode::kUnknownId, id);
  check_embedding(embedding, id);
  AugmentedMemory updated = it->second;
  updated.clue = clue;
  updated.embedding = std::move(embedding);
  updated.augmented = true;
  append(updated);
  it->second = updated;
  return updated;
}

std::vector<AugmentedMemory> MemoryStore::scan(std::optional<TimeWindow> window) const {
  std::vector<AugmentedMemory> out;
  {
    std::shared_lock lock(mutex_);
    out.reserve(records_.size());
    for (const auto& [id, m] : records_) {
      if (window && (m.entry.created_at < window->begin || m.entry.created_at > window->end)) {
        continue;
      }
      out.push_back(m);
    }
  }
  std::sort(out.begin(), out.end(), [](const AugmentedMemory& a, const AugmentedMemory& b) {
    if (a.entry.created_at != b.entry.created_at) return a.entry.created_at < b.entry.created_at;
    return a.entry.id < b.entry.id;
  });
  return out;
}

void MemoryStore::compact() {
  if (path_.empty()) return;
  std::unique_lock lock(mutex_);
  std::vector<const AugmentedMemory*> snapshot;
  snapshot.reserve(records_.size());
  for (const auto& [id, m] : records_) snapshot.push_back(&m);
  std::sort(snapshot.begin(), snapshot.end(), [](const AugmentedMemory* a, const AugmentedMemory* b) {
    if (a->entry.created_at != b->entry.created_at) return a->entry.created_at < b->entry.created_at;
    return a->entry.id < b->entry.id;
  });
  auto tmp = path_;
  tmp += ".compact";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    for (const auto* m : snapshot) out << to_json_line(*m).dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path_);
}

std::size_t MemoryStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

}  // namespace memqa
