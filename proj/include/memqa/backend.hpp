#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "memqa/error.hpp"

namespace memqa {

// Where and how to reach an external JSON-over-HTTP service.
struct HttpEndpoint {
  std::string url;                 // http://host:port/path
  std::string credential_env_var;  // sent as a bearer token when set
  int timeout_ms = 30000;
  int max_retries = 2;
};

// POSTs `body` and returns the parsed JSON response. Connection failures and
// 5xx responses are retried up to max_retries times. After the last attempt
// a timeout raises kTimeout and any other failure raises `unavailable`.
nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body,
                         ErrorCode unavailable);
nlohmann::json get_json(const HttpEndpoint& endpoint, const std::string& path,
                        ErrorCode unavailable);

// A prompt-in, text-out model (LLM used for generation, judging, date parsing).
class TextBackend {
 public:
  virtual ~TextBackend() = default;
  // Throws Error(kBackendUnavailable) or Error(kTimeout).
  virtual std::string complete(const std::string& prompt) = 0;
};

// Contract: POST {"prompt","max_tokens"} -> {"text"}.
class HttpTextBackend final : public TextBackend {
 public:
  HttpTextBackend(HttpEndpoint endpoint, int max_tokens = 512)
      : endpoint_(std::move(endpoint)), max_tokens_(max_tokens) {}
  std::string complete(const std::string& prompt) override;

 private:
  HttpEndpoint endpoint_;
  int max_tokens_;
};

// Test double backed by a callable.
class FunctionBackend final : public TextBackend {
 public:
  explicit FunctionBackend(std::function<std::string(const std::string&)> fn)
      : fn_(std::move(fn)) {}
  std::string complete(const std::string& prompt) override {
    ++calls_;
    return fn_(prompt);
  }
  int calls() const noexcept { return calls_.load(); }

 private:
  std::function<std::string(const std::string&)> fn_;
  std::atomic<int> calls_{0};
};

// Deterministic replay: returns the response of the first fixture whose key
// occurs in the prompt. Unmatched prompts raise kBackendUnavailable.
class FixtureBackend final : public TextBackend {
 public:
  explicit FixtureBackend(std::vector<std::pair<std::string, std::string>> fixtures)
      : fixtures_(std::move(fixtures)) {}
  // JSON object {key: response} or array of {"key","response"}.
  static std::unique_ptr<FixtureBackend> from_file(const std::string& path);
  std::string complete(const std::string& prompt) override;

 private:
  std::vector<std::pair<std::string, std::string>> fixtures_;
};

// Mock generator: reads the candidate array out of an answer-generation
// prompt and answers from the first (top-ranked) candidate.
class TopCandidateBackend final : public TextBackend {
 public:
  std::string complete(const std::string& prompt) override;
};

}  // namespace memqa
