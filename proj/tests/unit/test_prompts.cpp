#include <mutex>

#include "helpers.hpp"
#include "memqa/answer.hpp"
#include "memqa/augmentation.hpp"
#include "memqa/calendar.hpp"
#include "memqa/judge.hpp"
#include "memqa/prompts.hpp"
#include "memqa/temporal.hpp"

using namespace memqa;

namespace {

std::string golden(const std::string& name) { return testutil::read_file(testutil::data_path("golden/" + name + ".txt")); }

std::string substitute(std::string text, const std::vector<std::pair<std::string, std::string>>& subs) {
  for (const auto& [from, to] : subs) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    CHECK(text.find(from, pos + to.size()) == std::string::npos);
  }
  return text;
}

class Recorder final : public AugmentationProvider {
 public:
  std::string run(ProviderTask task, const MemoryEntry&, const std::string& prompt) override {
    std::lock_guard lock(mu);
    prompts[task] = prompt;
    if (task == ProviderTask::kCaption) return R"({"image_description":"d"})";
    return "done";
  }
  std::mutex mu;
  std::map<ProviderTask, std::string> prompts;
};

}  // namespace

TEST_CASE("registry") {
  CHECK(prompts::ids().size() == 6);
  for (auto id : prompts::ids()) {
    CHECK(prompts::has(id));
    CHECK(prompts::get(id) == golden(std::string(id)));
  }
  CHECK_FALSE(prompts::has("nope"));
  CHECK_THROWS_CODE(prompts::get("nope"), ErrorCode::kInvalidArgument);
}

TEST_CASE("render is a single pass") {
  CHECK(prompts::render("a {x} b {{y}} c {z}", {{"x", "{y}"}, {"y", "Y"}}) == "a {y} b Y c {z}");
  CHECK(prompts::render("{\"k\": 1} {", {{"k", "no"}}) == "{\"k\": 1} {");
  CHECK(prompts::render("{{x}}{x}", {{"x", "1"}}) == "11");
  CHECK(prompts::render("", {}).empty());
}

TEST_CASE("datetime prompt matches golden") {
  const RecallQuery q{"where did I park yesterday", 1714953600 + 10 * 3600, 0};
  CHECK(render_datetime_prompt(q) ==
        substitute(golden("datetime_match"), {{"{{question}}", q.text}, {"{{recall_time}}", "2024-05-06 Monday"}}));
}

TEST_CASE("judge prompt matches golden") {
  CHECK(render_judge_prompt("Q?", "gold {x}", "pred") ==
        substitute(golden("auto_judge"), {{"{{question}}", "Q?"}, {"{{answer}}", "gold {x}"}, {"{{prediction}}", "pred"}}));
}

TEST_CASE("answer prompt matches golden") {
  const RecallQuery q{"which book did I save", 1714953600 + 10 * 3600 + 7 * 60, 0};
  AugmentedMemory m{{"m1", "a.jpg", "remember this book", 1714953600 - 3600, "1 Elm Street"},
                    {"OCR", "caption", "completion"}, std::nullopt, true};
  nlohmann::ordered_json arr = nlohmann::ordered_json::array({to_json(make_passage(m, 0))});
  CHECK(build_answer_prompt(q, {m}) ==
        substitute(golden("answer_generation"), {{"{current_date_time}", "2024-05-06 10:07 Monday"},
                                                 {"{memory_candidates}", arr.dump()},
                                                 {"{user_query}", q.text}}));
}

TEST_CASE("augmentation prompts match golden") {
  auto rec = std::make_shared<Recorder>();
  Augmenter aug(rec, rec, rec);
  const MemoryEntry e{"m1", "a.jpg", "remember this wine", 10, ""};
  auto out = aug.augment(e);
  CHECK(out.warnings.empty());
  CHECK(rec->prompts[ProviderTask::kCaption] == golden("qa_guided_description"));
  CHECK(rec->prompts[ProviderTask::kCompletion] ==
        substitute(golden("invocation_completion"), {{"{{invocation}}", e.invocation_command}}));
}
