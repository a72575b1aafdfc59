#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "memqa/backend.hpp"

namespace memqa {

struct JudgeVerdict {
  bool accurate = false;
  std::string explanation;
};

std::string render_judge_prompt(std::string_view question, std::string_view gold, std::string_view prediction);

// Reads "accuracy" ("true"/"false", or a JSON boolean) and "explanation".
// Throws kMalformedJudgeOutput.
JudgeVerdict parse_judge_reply(std::string_view text);

// LLM auto-judge. Backend failures surface as kJudgeUnavailable.
class Judge {
 public:
  explicit Judge(std::shared_ptr<TextBackend> backend);
  JudgeVerdict judge(std::string_view question, std::string_view gold, std::string_view prediction) const;

 private:
  std::shared_ptr<TextBackend> backend_;
};

}  // namespace memqa
