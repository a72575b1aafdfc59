#include "memqa/answer.hpp"

#include <algorithm>
#include <set>

#include "memqa/calendar.hpp"
#include "memqa/error.hpp"
#include "memqa/log.hpp"
#include "memqa/prompts.hpp"
#include "memqa/text.hpp"

namespace memqa {

MemoryPassage make_passage(const AugmentedMemory& memory, int tz_offset_minutes) {
  MemoryPassage p;
  p.memory_id = memory.entry.id;
  p.created_datetime = format_local_datetime(memory.entry.created_at, tz_offset_minutes);
  p.description = memory.entry.invocation_command;
  const auto& completion = memory.clue.invocation_completion;
  const auto& caption = memory.clue.image_caption;
  p.visual_content = completion.empty() ? caption : (caption.empty() ? completion : completion + " " + caption);
  p.ocr_text = memory.clue.ocr_text;
  p.address = memory.entry.location;
  return p;
}

nlohmann::ordered_json to_json(const MemoryPassage& p) {
  nlohmann::ordered_json j;
  j["memory_id"] = p.memory_id;
  j["created_datetime"] = p.created_datetime;
  j["description"] = p.description;
  j["visual_content"] = p.visual_content;
  j["ocr_text"] = p.ocr_text;
  j["address"] = p.address;
  return j;
}

std::string build_answer_prompt(const RecallQuery& query, const std::vector<AugmentedMemory>& candidates,
                                std::size_t max_candidates) {
  validate(query);
  if (candidates.empty()) throw Error(ErrorCode::kInvalidArgument, "answer prompt needs at least one candidate");
  if (candidates.size() > max_candidates) {
    throw Error(ErrorCode::kTooManyCandidates, std::to_string(candidates.size()) + " candidates exceed the limit of " +
                                                   std::to_string(max_candidates));
  }
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const auto& m : candidates) array.push_back(to_json(make_passage(m, query.timezone_offset_minutes)));
  return prompts::render(
      prompts::get(prompts::kAnswerGeneration),
      {{"current_date_time", format_local_datetime(query.asked_at, query.timezone_offset_minutes)},
       {"memory_candidates", array.dump()},
       {"user_query", query.text}});
}

nlohmann::ordered_json to_json(const AnswerResult& r) {
  nlohmann::ordered_json j;
  j["id_list"] = r.id_list;
  j["response"] = r.response;
  if (r.fallback) j["fallback"] = true;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

std::optional<AnswerResult> parse_answer_reply(std::string_view text) {
  const auto j = nlohmann::json::parse(extract_json_object(text), nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  auto ids = j.find("id_list");
  auto response = j.find("response");
  if (ids == j.end() || !ids->is_array() || response == j.end() || !response->is_string()) return std::nullopt;
  AnswerResult r;
  for (const auto& id : *ids) {
    if (!id.is_string()) return std::nullopt;
    r.id_list.push_back(id.get<std::string>());
  }
  r.response = response->get<std::string>();
  if (trim(r.response).empty()) return std::nullopt;
  return r;
}

AnswerGenerator::AnswerGenerator(std::shared_ptr<TextBackend> backend, std::size_t max_in_flight,
                                 std::size_t max_candidates)
    : backend_(std::move(backend)),
      max_candidates_(max_candidates),
      slots_(static_cast<std::ptrdiff_t>(std::clamp<std::size_t>(max_in_flight, 1, 1024))) {
  if (!backend_) throw Error(ErrorCode::kConfigError, "answer generator needs a backend");
}

std::string AnswerGenerator::call(const std::string& prompt) const {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{slots_};
  try {
    return backend_->complete(prompt);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBackendUnavailable) throw;
    throw Error(ErrorCode::kBackendUnavailable, e.what());
  }
}

AnswerResult AnswerGenerator::generate(const RecallQuery& query,
                                       const std::vector<AugmentedMemory>& candidates) const {
  const std::string prompt = build_answer_prompt(query, candidates, max_candidates_);
  std::string raw = call(prompt);
  auto parsed = parse_answer_reply(raw);
  if (!parsed) {
    log::warn("answer reply was not JSON; reprompting once");
    raw = call(prompt + "\nRespond with only a JSON object: {\"id_list\": [...], \"response\": \"...\"}.");
    parsed = parse_answer_reply(raw);
  }
  if (!parsed) {
    AnswerResult fallback;
    fallback.response = trim(raw);
    fallback.fallback = true;
    fallback.warnings.push_back("backend output was not JSON after one reprompt; returning raw text");
    return fallback;
  }

  std::set<std::string> known;
  for (const auto& m : candidates) known.insert(m.entry.id);
  AnswerResult result;
  result.response = parsed->response;
  std::set<std::string> seen;
  for (auto& id : parsed->id_list) {
    if (!known.contains(id)) {
      result.warnings.push_back("dropped id not among candidates: " + id);
      log::warn(result.warnings.back());
      continue;
    }
    if (seen.insert(id).second) result.id_list.push_back(std::move(id));
  }
  return result;
}

}  // namespace memqa
