#include "memqa/prompts.hpp"

#include <array>
#include <utility>

#include "memqa/error.hpp"

namespace memqa::prompts {

namespace {

constexpr std::string_view kQaGuidedDescriptionText = R"PROMPT(## Task Description
You are a skilled assistant capable of generating recall questions and answers based on an image, as well as creating a detailed image description that addresses all the recall questions.

### Key Definitions
* **Recall Question**: A user query about an image from their past, aiming to retrieve relevant information among all images at a later time.
  Examples:
  - What is the name of the Korean restaurant?
  - Where did I park my car today?
  - Where is the bedroom key?
  - When is the milk expiration date?
  - What vegetables do I have in my fridge?
  Non-examples:
  - What is the girl doing in the image?
  - Why are there stickers on the oranges?
  - What time is it?
  - Where is the bench located in the image?
  - What object is on the right side of the image?
* **Recall Answer**: A precise response to a recall question, enabling information recall without visual reference.

## Output Requirements
Given an image, provide the following items in JSON format:
  - 'recall_question': A list of potential recall questions a user might ask about the image.
  - 'recall_answer': A list of corresponding recall answers for each recall question.
  - 'image_description': A comprehensive image description with additional details that address all the recall questions above.

Please analyze the provided image and generate the required items.)PROMPT";

constexpr std::string_view kInvocationCompletionText = R"PROMPT(## Task Description
You are a skilled assistant capable of completing invocation sentences based on an image.

### Key Definitions
* **Invocation Sentence**: A concise transcription associated with an image object, capturing key information for later recall.
* **Invocation Completion**: A completed invocation sentence with additional details about the object, such as attributes, actions, or context.

Example:
Invocation Sentence: "remember the restaurant"
Invocation Completion: "remember the Korean restaurant named 'Kochi' in NYC"

## Input
You have been provided with an invocation sentence for the image:
{{invocation}}

## Output Requirements
Please analyze the image and generate an invocation completion for the invocation sentence.)PROMPT";

constexpr std::string_view kDatetimeMatchText = R"PROMPT(Given a user question recalling a saved memory and its timestamp, extract the search_start_date and search_end_date of the user question. Also, predict whether the user wants to search for the most recent memory or not.
- search_start_date: The start date of the search range in the database, formatted as "YYYY-MM-DD" (e.g., "2024-08-25").
- search_end_date: The end date of the search range, also formatted as "YYYY-MM-DD" (e.g., "2024-08-25").
- search_recent: A boolean value indicating whether the user wants to search for the most recent memory.
- If no time information is provided in the question, set search_start_date and search_end_date to empty strings ("").

For example:
question: "where did I park yesterday"
recall_time: "2024-05-06 Tuesday"
output:
{"search_start_date": "2024-05-05", "search_end_date": "2024-05-05", "search_recent": false}

question: "which book did I saved last time"
recall_time: "2024-08-26 Monday"
output:
{"search_start_date": "", "search_end_date": "", "search_recent": true}

Here is the user question and recall time:
question: {{question}}
recall_time: {{recall_time}}
Now generate the output in JSON format without any other text.)PROMPT";

constexpr std::string_view kAnswerGenerationText = R"PROMPT(### Instruction:
You are an assistant. Your current task is to answer questions about user memory. You need to provide two fields in JSON format, {id_list: [""], response: ""}.
Here are detailed instructions:
  -- Input structure: When given a user memory, it will contain: memory_id, created_datetime, description, visual_content, ocr_text.
  -- Input structure: visual_content is a description of the image attached to the user memory, and ocr_text is the text extracted from the image. Both are optional and might not be available.
  -- Response format: Be terse and to the point, don't mention your reasoning, and answer in a single sentence.
  -- id_list: A list of memory_id of the memories used for answering the query.
Now look at all the content in all given user memories, and provide "response".
### Input:
Current date time is: {current_date_time}
Candidate memories: {memory_candidates}
Current turn:
- User: {user_query}
### Response:)PROMPT";

constexpr std::string_view kAnswerGenerationBaseText = R"PROMPT(### Instruction:
You are an assistant. Your current task is to answer questions about user memory.
Here are detailed instructions:
  -- Input structure: When given a user memory, it will contain: memory_id, created_datetime, description, visual_content, ocr_text.
  -- Input structure: visual_content is a description of the image attached to the user memory, and ocr_text is the text extracted from the image. Both are optional and might not be available.
  -- Response format: Be terse and to the point, don't mention your reasoning, and answer in a single sentence.
Now look at all the content in all given user memories, and provide "response".
### Input:
Current date time is: {current_date_time}
Candidate memories: {memory_candidates}
Current turn:
- User: {user_query}
### Response:)PROMPT";

constexpr std::string_view kAutoJudgeText = R"PROMPT(You are an evaluator, and you are given a task to evaluate a model predictions with a given question. Let's follow the instructions step by step to make a judgement.
1. As the first step, you need to check whether the prediction was really answering the question.
2. If the model prediction does provide a meaningful answer, judge whether the model Prediction matches the ground truth answer by reasoning according to the following steps:
2.1: Always assume the ground truth is correct. 
2.2: Pay attention to theses special cases:
    a. If the ground truth answer contains numbers,  the value of "accuracy" is true only if numbers in ground truth and numbers in model predictions match very well; in case of math questions, "accuracy" is true only if the numbers in model predictions EXACTLY matches the numbers in ground truth;
    b. If the ground truth answer contains time, and/or time range, "accuracy" is "true" only if if times and time ranges in ground truth and model predictions match very well.
    c. If the ground truth answer contains a set of objects, "accuracy" is "true" if the model prediction covers most of the objects in the ground truth; however, "accuracy" if "false" if the model prediction has a lot of objects that are not in the ground truth.
    d. If the ground truth is something similar to "I don't know", "accuracy" is "true" only if the model prediction also implies the similar thing.
2.3: Even if the prediction statement is reasonable, if it conflicts with or does not match the ground truth, "accuracy" should be "false".
2.4. "Accuracy" is true if the ground truth information is covered by the prediction. The prediction is allowed to provide more information but should not be against the ground truth. If it is hard to decide whether the prediction matches ground truth, "accuracy" should be "false".
Think step by step following the instructions above, and then make a judgment. Respond with only a single JSON blob with an "explanation" field that has your short(less than 100 word) reasoning steps and an "accuracy" field which is "true" or "false". 
Question: {{question}}
Ground truth: {{answer}}
Prediction: {{prediction}})PROMPT";

constexpr std::array<std::pair<std::string_view, std::string_view>, 6> kTemplates = {{
    {"qa_guided_description", kQaGuidedDescriptionText},
    {"invocation_completion", kInvocationCompletionText},
    {"datetime_match", kDatetimeMatchText},
    {"answer_generation", kAnswerGenerationText},
    {"answer_generation_base", kAnswerGenerationBaseText},
    {"auto_judge", kAutoJudgeText},
}};

}  // namespace

std::string_view get(std::string_view id) {
  for (const auto& [name, text] : kTemplates) {
    if (name == id) return text;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown prompt template: " + std::string(id));
}

bool has(std::string_view id) {
  for (const auto& [name, text] : kTemplates) {
    if (name == id) return true;
  }
  return false;
}

std::vector<std::string_view> ids() {
  std::vector<std::string_view> out;
  for (const auto& [name, text] : kTemplates) out.push_back(name);
  return out;
}

std::string render(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const bool doubled = tmpl.substr(i).starts_with("{{");
      const std::size_t open = doubled ? 2 : 1;
      const std::string_view close = doubled ? "}}" : "}";
      const auto end = tmpl.find(close, i + open);
      if (end != std::string_view::npos) {
        const std::string name(tmpl.substr(i + open, end - i - open));
        if (auto it = values.find(name); it != values.end()) {
          out += it->second;
          i = end + close.size();
          continue;
        }
      }
    }
    out.push_back(tmpl[i]);
    ++i;
  }
  return out;
}

}  // namespace memqa::prompts
