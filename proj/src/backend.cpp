#include "memqa/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "memqa/text.hpp"

namespace memqa {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host:port
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::kConfigError, "endpoint url needs a scheme: " + url);
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

httplib::Headers auth_headers(const HttpEndpoint& endpoint) {
  httplib::Headers headers;
  if (!endpoint.credential_env_var.empty()) {
    if (const char* secret = std::getenv(endpoint.credential_env_var.c_str())) {
      headers.emplace("Authorization", std::string("Bearer ") + secret);
    }
  }
  return headers;
}

template <typename Call>
nlohmann::json with_retries(const HttpEndpoint& endpoint, ErrorCode unavailable, Call&& call) {
  if (endpoint.timeout_ms <= 0) throw Error(ErrorCode::kConfigError, "timeout_ms must be positive");
  const auto [origin, path] = split_url(endpoint.url);
  httplib::Client client(origin);
  const auto timeout = std::chrono::milliseconds(endpoint.timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  std::string last_error;
  bool timed_out = false;
  const int attempts = std::max(0, endpoint.max_retries) + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    httplib::Result res = call(client, path);
    if (!res) {
      const auto err = res.error();
      timed_out = err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout;
      last_error = httplib::to_string(err);
      continue;
    }
    timed_out = false;
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status >= 400) {
      throw Error(unavailable, endpoint.url + " rejected request: HTTP " + std::to_string(res->status));
    }
    auto parsed = nlohmann::json::parse(res->body, nullptr, false);
    if (parsed.is_discarded()) {
      throw Error(unavailable, endpoint.url + " returned non-JSON body");
    }
    return parsed;
  }
  if (timed_out) {
    throw Error(ErrorCode::kTimeout, endpoint.url + " timed out after " + std::to_string(attempts) +
                                         " attempts");
  }
  throw Error(unavailable, endpoint.url + " failed after " + std::to_string(attempts) +
                               " attempts: " + last_error);
}

}  // namespace

nlohmann::json post_json(const HttpEndpoint& endpoint, const nlohmann::json& body,
                         ErrorCode unavailable) {
  const std::string payload = body.dump();
  const auto headers = auth_headers(endpoint);
  return with_retries(endpoint, unavailable, [&](httplib::Client& c, const std::string& path) {
    return c.Post(path, headers, payload, "application/json");
  });
}

nlohmann::json get_json(const HttpEndpoint& endpoint, const std::string& path,
                        ErrorCode unavailable) {
  const auto headers = auth_headers(endpoint);
  HttpEndpoint base = endpoint;
  base.url = endpoint.url;
  while (!base.url.empty() && base.url.back() == '/') base.url.pop_back();
  base.url += path;
  return with_retries(base, unavailable, [&](httplib::Client& c, const std::string& p) {
    return c.Get(p, headers);
  });
}

std::string HttpTextBackend::complete(const std::string& prompt) {
  const nlohmann::json body = {{"prompt", prompt}, {"max_tokens", max_tokens_}};
  const auto reply = post_json(endpoint_, body, ErrorCode::kBackendUnavailable);
  auto it = reply.find("text");
  if (it == reply.end() || !it->is_string()) {
    throw Error(ErrorCode::kBackendUnavailable, endpoint_.url + " reply lacks a \"text\" string");
  }
  return it->get<std::string>();
}

std::unique_ptr<FixtureBackend> FixtureBackend::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open fixture file " + path);
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kConfigError, "fixture file is not JSON: " + path);
  std::vector<std::pair<std::string, std::string>> fixtures;
  auto as_text = [](const nlohmann::json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) fixtures.emplace_back(k, as_text(v));
  } else if (j.is_array()) {
    for (const auto& item : j) {
      fixtures.emplace_back(item.at("key").get<std::string>(), as_text(item.at("response")));
    }
  } else {
    throw Error(ErrorCode::kConfigError, "fixture file must hold an object or array: " + path);
  }
  return std::make_unique<FixtureBackend>(std::move(fixtures));
}

std::string FixtureBackend::complete(const std::string& prompt) {
  for (const auto& [key, response] : fixtures_) {
    if (prompt.find(key) != std::string::npos) return response;
  }
  throw Error(ErrorCode::kBackendUnavailable, "no fixture matches prompt");
}

std::string TopCandidateBackend::complete(const std::string& prompt) {
  static constexpr std::string_view kMarker = "Candidate memories: ";
  const auto at = prompt.find(kMarker);
  if (at == std::string::npos) throw Error(ErrorCode::kBackendUnavailable, "not an answer prompt");
  const auto line_end = prompt.find('\n', at);
  const auto array_text = prompt.substr(at + kMarker.size(), line_end - at - kMarker.size());
  const auto candidates = nlohmann::json::parse(array_text, nullptr, false);
  if (candidates.is_discarded() || !candidates.is_array() || candidates.empty()) {
    return R"({"id_list": [], "response": "I don't know."})";
  }
  const auto& top = candidates.front();
  std::string evidence = top.value("ocr_text", std::string{});
  if (evidence.empty()) evidence = top.value("visual_content", std::string{});
  if (evidence.empty()) evidence = top.value("description", std::string{});
  nlohmann::ordered_json out;
  out["id_list"] = nlohmann::json::array({top.value("memory_id", std::string{})});
  out["response"] = evidence;
  return out.dump();
}

}  // namespace memqa
