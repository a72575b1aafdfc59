#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace memqa::prompts {

inline constexpr std::string_view kVersion = "memqa-prompts/1";

// Registered template ids.
inline constexpr std::string_view kQaGuidedDescription = "qa_guided_description";
inline constexpr std::string_view kInvocationCompletion = "invocation_completion";
inline constexpr std::string_view kDatetimeMatch = "datetime_match";
inline constexpr std::string_view kAnswerGeneration = "answer_generation";
inline constexpr std::string_view kAnswerGenerationBase = "answer_generation_base";
inline constexpr std::string_view kAutoJudge = "auto_judge";

// Throws Error(kInvalidArgument) for an unregistered id.
std::string_view get(std::string_view id);
bool has(std::string_view id);
std::vector<std::string_view> ids();

// Single left-to-right pass replacing each `{{name}}` / `{name}` placeholder
// listed in `values`; substituted text is never rescanned. Unknown braces
// are copied through.
std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values);

}  // namespace memqa::prompts
