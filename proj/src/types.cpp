#include "memqa/types.hpp"

#include "memqa/error.hpp"

namespace memqa {

void validate(const MemoryEntry& entry) {
  if (entry.id.empty()) throw Error(ErrorCode::kInvalidEntry, "empty id");
  if (entry.invocation_command.empty()) {
    throw Error(ErrorCode::kInvalidEntry, "empty invocation_command for " + entry.id);
  }
  if (entry.created_at <= 0) {
    throw Error(ErrorCode::kInvalidEntry, "non-positive created_at for " + entry.id);
  }
}

void validate(const RecallQuery& query) {
  if (query.text.empty()) throw Error(ErrorCode::kInvalidArgument, "empty question text");
  if (query.asked_at <= 0) throw Error(ErrorCode::kInvalidArgument, "non-positive asked_at");
}

nlohmann::ordered_json to_json_line(const AugmentedMemory& memory) {
  nlohmann::ordered_json j;
  const auto& e = memory.entry;
  j["id"] = e.id;
  j["image_ref"] = e.image_ref ? nlohmann::ordered_json(*e.image_ref) : nlohmann::ordered_json();
  j["invocation_command"] = e.invocation_command;
  j["created_at"] = e.created_at;
  j["location"] = e.location;
  if (memory.augmented) {
    j["ocr_text"] = memory.clue.ocr_text;
    j["image_caption"] = memory.clue.image_caption;
    j["invocation_completion"] = memory.clue.invocation_completion;
    if (memory.embedding) j["embedding"] = *memory.embedding;
  }
  return j;
}

MemoryEntry entry_from_json(const nlohmann::json& line) {
  if (!line.is_object()) throw Error(ErrorCode::kInvalidEntry, "memory line is not an object");
  try {
    MemoryEntry e;
    e.id = line.at("id").get<std::string>();
    if (auto it = line.find("image_ref"); it != line.end() && !it->is_null()) {
      e.image_ref = it->get<std::string>();
    }
    e.invocation_command = line.at("invocation_command").get<std::string>();
    e.created_at = line.at("created_at").get<std::int64_t>();
    e.location = line.value("location", std::string{});
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInvalidEntry, ex.what());
  }
}

AugmentedMemory memory_from_json(const nlohmann::json& line) {
  AugmentedMemory m;
  m.entry = entry_from_json(line);
  try {
    const bool has_clue = line.contains("ocr_text") || line.contains("image_caption") ||
                          line.contains("invocation_completion");
    if (has_clue) {
      m.augmented = true;
      m.clue.ocr_text = line.value("ocr_text", std::string{});
      m.clue.image_caption = line.value("image_caption", std::string{});
      m.clue.invocation_completion = line.value("invocation_completion", std::string{});
    }
    if (auto it = line.find("embedding"); it != line.end() && !it->is_null()) {
      m.embedding = it->get<Vector>();
      m.augmented = true;
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInvalidEntry, ex.what());
  }
  return m;
}

}  // namespace memqa
