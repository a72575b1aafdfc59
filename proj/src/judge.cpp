#include "memqa/judge.hpp"

#include <json.hpp>

#include "memqa/error.hpp"
#include "memqa/prompts.hpp"
#include "memqa/text.hpp"

namespace memqa {

std::string render_judge_prompt(std::string_view question, std::string_view gold, std::string_view prediction) {
  return prompts::render(prompts::get(prompts::kAutoJudge), {{"question", std::string(question)},
                                                             {"answer", std::string(gold)},
                                                             {"prediction", std::string(prediction)}});
}

JudgeVerdict parse_judge_reply(std::string_view text) {
  const auto j = nlohmann::json::parse(extract_json_object(text), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::kMalformedJudgeOutput, "judge reply is not JSON");
  auto acc = j.find("accuracy");
  if (acc == j.end()) throw Error(ErrorCode::kMalformedJudgeOutput, "judge reply lacks \"accuracy\"");
  JudgeVerdict v;
  if (acc->is_boolean()) {
    v.accurate = acc->get<bool>();
  } else if (acc->is_string()) {
    std::string s = trim(acc->get<std::string>());
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "true") {
      v.accurate = true;
    } else if (s == "false") {
      v.accurate = false;
    } else {
      throw Error(ErrorCode::kMalformedJudgeOutput, "\"accuracy\" must be \"true\" or \"false\"");
    }
  } else {
    throw Error(ErrorCode::kMalformedJudgeOutput, "\"accuracy\" must be \"true\" or \"false\"");
  }
  if (auto e = j.find("explanation"); e != j.end() && e->is_string()) v.explanation = e->get<std::string>();
  return v;
}

Judge::Judge(std::shared_ptr<TextBackend> backend) : backend_(std::move(backend)) {
  if (!backend_) throw Error(ErrorCode::kConfigError, "judge needs a backend");
}

JudgeVerdict Judge::judge(std::string_view question, std::string_view gold, std::string_view prediction) const {
  std::string reply;
  try {
    reply = backend_->complete(render_judge_prompt(question, gold, prediction));
  } catch (const Error& e) {
    throw Error(ErrorCode::kJudgeUnavailable, e.what());
  }
  return parse_judge_reply(reply);
}

}  // namespace memqa
