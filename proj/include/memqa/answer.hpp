#pragma once

#include <cstddef>
#include <memory>
#include <semaphore>
#include <string>
#include <vector>

#include <json.hpp>

#include "memqa/backend.hpp"
#include "memqa/types.hpp"

namespace memqa {

// One candidate memory as shown to the answer generator.
struct MemoryPassage {
  std::string memory_id;
  std::string created_datetime;  // "YYYY-MM-DD HH:MM Weekday", query timezone
  std::string description;       // invocation command
  std::string visual_content;    // invocation completion + image caption
  std::string ocr_text;
  std::string address;
};

MemoryPassage make_passage(const AugmentedMemory& memory, int tz_offset_minutes);
nlohmann::ordered_json to_json(const MemoryPassage& passage);

inline constexpr std::size_t kDefaultMaxCandidates = 20;

// Renders the answer-generation prompt with the candidates serialized as a
// JSON array in the given order. Throws kInvalidArgument for an empty list and
// kTooManyCandidates above `max_candidates`.
std::string build_answer_prompt(const RecallQuery& query, const std::vector<AugmentedMemory>& candidates,
                                std::size_t max_candidates = kDefaultMaxCandidates);

struct AnswerResult {
  std::vector<std::string> id_list;
  std::string response;
  bool fallback = false;  // backend never produced parseable JSON
  std::vector<std::string> warnings;
};

nlohmann::ordered_json to_json(const AnswerResult& result);

// Parses {"id_list": [...], "response": "..."} out of model output.
std::optional<AnswerResult> parse_answer_reply(std::string_view text);

// Calls the backend, keeps only ids that name a supplied candidate, reprompts
// once on unparseable output and then falls back to the raw text with an
// empty id list. At most `max_in_flight` calls run concurrently.
class AnswerGenerator {
 public:
  explicit AnswerGenerator(std::shared_ptr<TextBackend> backend, std::size_t max_in_flight = 4,
                           std::size_t max_candidates = kDefaultMaxCandidates);

  AnswerResult generate(const RecallQuery& query, const std::vector<AugmentedMemory>& candidates) const;

 private:
  std::string call(const std::string& prompt) const;

  std::shared_ptr<TextBackend> backend_;
  std::size_t max_candidates_;
  mutable std::counting_semaphore<1024> slots_;
};

}  // namespace memqa
