#include "memqa/augmentation.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "memqa/log.hpp"
#include "memqa/prompts.hpp"
#include "memqa/text.hpp"

namespace memqa {

const char* to_string(ProviderTask task) noexcept {
  switch (task) {
    case ProviderTask::kOcr: return "ocr";
    case ProviderTask::kCaption: return "caption";
    case ProviderTask::kCompletion: return "completion";
  }
  return "unknown";
}

void validate(const ProviderConfig& config) {
  if (config.timeout_ms <= 0) throw Error(ErrorCode::kConfigError, "timeout_ms must be positive");
  if (config.max_retries < 0) throw Error(ErrorCode::kConfigError, "max_retries must be >= 0");
  if (config.kind == ProviderKind::kExternalHttp && config.endpoint.empty()) {
    throw Error(ErrorCode::kConfigError, "external-http provider requires an endpoint");
  }
}

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

std::string MockSidecarProvider::run(ProviderTask task, const MemoryEntry& entry,
                                     const std::string& /*prompt*/) {
  if (!entry.image_ref || entry.image_ref->empty()) {
    if (task == ProviderTask::kOcr) return {};
    if (task == ProviderTask::kCompletion && echo_completion_) return entry.invocation_command;
    throw Error(ErrorCode::kProviderUnavailable, entry.id + ": no image_ref for mock provider");
  }
  std::filesystem::path base = *entry.image_ref;
  if (base.is_relative() && !root_.empty()) base = root_ / base;

  static constexpr const char* kSuffix[] = {".ocr.txt", ".caption.json", ".completion.txt"};
  auto sidecar = base;
  sidecar += kSuffix[static_cast<int>(task)];
  if (auto content = read_file(sidecar)) return *content;

  switch (task) {
    case ProviderTask::kOcr:
      return {};
    case ProviderTask::kCompletion:
      if (echo_completion_) return entry.invocation_command;
      [[fallthrough]];
    case ProviderTask::kCaption:
      break;
  }
  throw Error(ErrorCode::kProviderUnavailable, "missing sidecar " + sidecar.string());
}

HttpProvider::HttpProvider(const ProviderConfig& config) {
  validate(config);
  endpoint_ = {config.endpoint, config.credential_env_var, config.timeout_ms, config.max_retries};
}

std::string HttpProvider::run(ProviderTask task, const MemoryEntry& entry, const std::string& prompt) {
  const nlohmann::json body = {
      {"task", to_string(task)},
      {"image_ref", entry.image_ref ? nlohmann::json(*entry.image_ref) : nlohmann::json()},
      {"prompt", prompt}};
  const auto reply = post_json(endpoint_, body, ErrorCode::kProviderUnavailable);
  auto it = reply.find("output");
  if (it == reply.end() || it->is_null()) {
    throw Error(ErrorCode::kMalformedProviderOutput, endpoint_.url + " reply lacks \"output\"");
  }
  return it->is_string() ? it->get<std::string>() : it->dump();
}

std::unique_ptr<AugmentationProvider> make_provider(const ProviderConfig& config) {
  validate(config);
  if (config.kind == ProviderKind::kExternalHttp) return std::make_unique<HttpProvider>(config);
  return std::make_unique<MockSidecarProvider>(config.sidecar_root, config.echo_completion);
}

Augmenter::Augmenter(std::shared_ptr<AugmentationProvider> ocr,
                     std::shared_ptr<AugmentationProvider> caption,
                     std::shared_ptr<AugmentationProvider> completion)
    : ocr_(std::move(ocr)), caption_(std::move(caption)), completion_(std::move(completion)) {
  if (!ocr_ || !caption_ || !completion_) {
    throw Error(ErrorCode::kConfigError, "all three augmentation providers are required");
  }
}

std::string Augmenter::run_ocr(const MemoryEntry& entry) const {
  return ocr_->run(ProviderTask::kOcr, entry, "");
}

std::string Augmenter::generate_qa_guided_caption(const MemoryEntry& entry) const {
  const std::string prompt(prompts::get(prompts::kQaGuidedDescription));
  const std::string raw = caption_->run(ProviderTask::kCaption, entry, prompt);
  const std::string object = extract_json_object(raw);
  const auto reply = nlohmann::json::parse(object, nullptr, false);
  if (object.empty() || reply.is_discarded() || !reply.is_object()) {
    throw Error(ErrorCode::kMalformedProviderOutput, entry.id + ": caption reply is not JSON");
  }
  auto it = reply.find("image_description");
  if (it == reply.end() || !it->is_string()) {
    throw Error(ErrorCode::kMalformedProviderOutput, entry.id + ": caption reply lacks image_description");
  }
  if (log::level() <= log::Level::kDebug) {
    log::debug(entry.id + " recall_question=" + reply.value("recall_question", nlohmann::json()).dump() +
               " recall_answer=" + reply.value("recall_answer", nlohmann::json()).dump());
  }
  return it->get<std::string>();
}

std::string Augmenter::complete_invocation(const MemoryEntry& entry) const {
  const std::string prompt = prompts::render(prompts::get(prompts::kInvocationCompletion),
                                             {{"invocation", entry.invocation_command}});
  std::string out = trim(completion_->run(ProviderTask::kCompletion, entry, prompt));
  if (out.empty()) {
    throw Error(ErrorCode::kMalformedProviderOutput, entry.id + ": empty invocation completion");
  }
  return out;
}

AugmentOutcome Augmenter::augment(const MemoryEntry& entry) const {
  AugmentOutcome outcome;
  std::vector<std::pair<std::string, std::string>> failures;
  auto attempt = [&](const char* field, std::string& slot, auto&& fn) {
    try {
      slot = fn();
    } catch (const Error& e) {
      failures.emplace_back(field, e.what());
      outcome.warnings.push_back(std::string(field) + " failed: " + e.what());
      log::warn(entry.id + ": " + outcome.warnings.back());
    }
  };
  attempt("ocr_text", outcome.clue.ocr_text, [&] { return run_ocr(entry); });
  attempt("image_caption", outcome.clue.image_caption, [&] { return generate_qa_guided_caption(entry); });
  attempt("invocation_completion", outcome.clue.invocation_completion,
          [&] { return complete_invocation(entry); });
  if (failures.size() == 3) {
    throw AugmentationError(entry.id + ": all augmentation providers failed", std::move(failures));
  }
  return outcome;
}

std::vector<Augmenter::BatchItem> Augmenter::augment_batch(std::span<const MemoryEntry> entries,
                                                           std::size_t workers) const {
  std::vector<BatchItem> results(entries.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      try {
        results[i].outcome = augment(entries[i]);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };
  const std::size_t n = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, entries.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
    work();
  }
  return results;
}

}  // namespace memqa
