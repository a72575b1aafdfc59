#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace memqa {

using Vector = std::vector<double>;

// A user-initiated snapshot: image reference, invocation command, creation
// instant (UTC epoch seconds) and free-text address.
struct MemoryEntry {
  std::string id;
  std::optional<std::string> image_ref;
  std::string invocation_command;
  std::int64_t created_at = 0;
  std::string location;

  bool operator==(const MemoryEntry&) const = default;
};

// Throws Error(kInvalidEntry) on empty id/command or non-positive timestamp.
void validate(const MemoryEntry& entry);

struct AuxiliaryClue {
  std::string ocr_text;
  std::string image_caption;
  std::string invocation_completion;

  bool operator==(const AuxiliaryClue&) const = default;
};

struct AugmentedMemory {
  MemoryEntry entry;
  AuxiliaryClue clue;
  std::optional<Vector> embedding;
  // False for bare entries, which are reported with an empty clue.
  bool augmented = false;

  bool operator==(const AugmentedMemory&) const = default;
};

struct RecallQuery {
  std::string text;
  std::int64_t asked_at = 0;
  int timezone_offset_minutes = 0;
};

void validate(const RecallQuery& query);

// memories.jsonl line codec. Clue fields and embedding are emitted only for
// augmented memories.
nlohmann::ordered_json to_json_line(const AugmentedMemory& memory);
AugmentedMemory memory_from_json(const nlohmann::json& line);
MemoryEntry entry_from_json(const nlohmann::json& line);

}  // namespace memqa
