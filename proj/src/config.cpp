#include "memqa/config.hpp"

#include <fstream>
#include <set>

#include "memqa/error.hpp"

namespace memqa {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorCode::kConfigError, where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.contains(key)) throw Error(ErrorCode::kConfigError, "unknown key " + where + "." + key);
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  if (p.empty()) return {};
  fs::path path(p);
  return path.is_relative() && !base.empty() ? base / path : path;
}

const char* backend_name(BackendKind k) {
  switch (k) {
    case BackendKind::kNone: return "none";
    case BackendKind::kHttp: return "http";
    case BackendKind::kFixture: return "fixture";
    case BackendKind::kTopCandidate: return "top-candidate";
  }
  return "none";
}

BackendConfig backend_from_json(const json& j, const fs::path& base, const std::string& where) {
  check_keys(j, {"kind", "endpoint", "credential_env_var", "timeout_ms", "max_retries", "max_tokens", "fixture"}, where);
  BackendConfig c;
  const auto kind = j.value("kind", std::string("none"));
  if (kind == "none") c.kind = BackendKind::kNone;
  else if (kind == "http") c.kind = BackendKind::kHttp;
  else if (kind == "fixture") c.kind = BackendKind::kFixture;
  else if (kind == "top-candidate") c.kind = BackendKind::kTopCandidate;
  else throw Error(ErrorCode::kConfigError, where + ".kind: unknown backend " + kind);
  c.endpoint = j.value("endpoint", std::string());
  c.credential_env_var = j.value("credential_env_var", std::string());
  c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.max_tokens = j.value("max_tokens", c.max_tokens);
  c.fixture_path = resolve(base, j.value("fixture", std::string()));
  return c;
}

ProviderConfig provider_from_json(const json& j, const fs::path& base, const std::string& where) {
  check_keys(j, {"kind", "endpoint", "credential_env_var", "timeout_ms", "max_retries", "sidecar_root", "echo_completion"},
             where);
  ProviderConfig c;
  const auto kind = j.value("kind", std::string("mock-sidecar"));
  if (kind == "mock-sidecar") c.kind = ProviderKind::kMockSidecar;
  else if (kind == "external-http") c.kind = ProviderKind::kExternalHttp;
  else throw Error(ErrorCode::kConfigError, where + ".kind: unknown provider " + kind);
  c.endpoint = j.value("endpoint", std::string());
  c.credential_env_var = j.value("credential_env_var", std::string());
  c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.sidecar_root = resolve(base, j.value("sidecar_root", std::string()));
  c.echo_completion = j.value("echo_completion", false);
  return c;
}

json backend_to_json(const BackendConfig& c) {
  json j{{"kind", backend_name(c.kind)}};
  if (!c.endpoint.empty()) j["endpoint"] = c.endpoint;
  if (!c.credential_env_var.empty()) j["credential_env_var"] = c.credential_env_var;
  if (!c.fixture_path.empty()) j["fixture"] = c.fixture_path.string();
  return j;
}

json provider_to_json(const ProviderConfig& c) {
  json j{{"kind", c.kind == ProviderKind::kMockSidecar ? "mock-sidecar" : "external-http"}};
  if (!c.endpoint.empty()) j["endpoint"] = c.endpoint;
  if (!c.sidecar_root.empty()) j["sidecar_root"] = c.sidecar_root.string();
  if (c.echo_completion) j["echo_completion"] = true;
  return j;
}

void check_backend(const BackendConfig& c, const std::string& where) {
  if (c.kind == BackendKind::kHttp && c.endpoint.empty()) {
    throw Error(ErrorCode::kConfigError, where + ": http backend needs an endpoint");
  }
  if (c.kind == BackendKind::kFixture && !fs::exists(c.fixture_path)) {
    throw Error(ErrorCode::kConfigError, where + ": fixture file not found: " + c.fixture_path.string());
  }
  if (c.timeout_ms <= 0 || c.max_retries < 0) throw Error(ErrorCode::kConfigError, where + ": bad timeout/retries");
}

}  // namespace

void validate(const EngineConfig& c) {
  if (c.k_retrieve == 0 || c.k_generate == 0) throw Error(ErrorCode::kConfigError, "k values must be positive");
  if (c.k_generate > c.k_retrieve) throw Error(ErrorCode::kConfigError, "k_generate must not exceed k_retrieve");
  if (c.workers == 0 || c.max_in_flight == 0) throw Error(ErrorCode::kConfigError, "worker caps must be positive");
  if (!c.embedder.external && c.embedder.dim == 0) throw Error(ErrorCode::kConfigError, "embedder dim must be positive");
  if (c.embedder.external && c.embedder.endpoint.empty()) {
    throw Error(ErrorCode::kConfigError, "external embedder needs an endpoint");
  }
  validate(c.ocr);
  validate(c.caption);
  validate(c.completion);
  check_backend(c.generator, "generator");
  check_backend(c.judge, "judge");
  check_backend(c.datetime, "datetime");
  if (c.strategy == RerankStrategy::kLearned && !c.weights_path.empty() && !fs::exists(c.weights_path)) {
    throw Error(ErrorCode::kConfigError, "weights file not found: " + c.weights_path.string());
  }
  if (!c.domains_path.empty() && !fs::exists(c.domains_path)) {
    throw Error(ErrorCode::kConfigError, "answer domains file not found: " + c.domains_path.string());
  }
  if (!c.store_path.empty()) {
    const auto dir = c.store_path.parent_path();
    std::error_code ec;
    if (!dir.empty() && !fs::exists(dir) && !fs::create_directories(dir, ec)) {
      throw Error(ErrorCode::kConfigError, "cannot create store directory " + dir.string());
    }
  }
}

EngineConfig config_from_json(const json& j, const fs::path& base) {
  check_keys(j, {"store", "embedder", "providers", "weights", "strategy", "k_retrieve", "k_generate", "generator",
                 "judge", "datetime", "answer_domains", "workers", "max_in_flight", "seed"},
             "config");
  EngineConfig c;
  try {
    c.store_path = resolve(base, j.value("store", std::string()));
    if (j.contains("embedder")) {
      const auto& e = j["embedder"];
      check_keys(e, {"kind", "dim", "bigrams", "endpoint", "credential_env_var", "timeout_ms", "max_retries"},
                 "embedder");
      const auto kind = e.value("kind", std::string("builtin"));
      if (kind != "builtin" && kind != "external") throw Error(ErrorCode::kConfigError, "embedder.kind: " + kind);
      c.embedder.external = kind == "external";
      c.embedder.dim = e.value("dim", c.embedder.dim);
      c.embedder.bigrams = e.value("bigrams", false);
      c.embedder.endpoint = e.value("endpoint", std::string());
      c.embedder.credential_env_var = e.value("credential_env_var", std::string());
      c.embedder.timeout_ms = e.value("timeout_ms", c.embedder.timeout_ms);
      c.embedder.max_retries = e.value("max_retries", c.embedder.max_retries);
    }
    if (j.contains("providers")) {
      const auto& p = j["providers"];
      check_keys(p, {"ocr", "caption", "completion"}, "providers");
      if (p.contains("ocr")) c.ocr = provider_from_json(p["ocr"], base, "providers.ocr");
      if (p.contains("caption")) c.caption = provider_from_json(p["caption"], base, "providers.caption");
      if (p.contains("completion")) c.completion = provider_from_json(p["completion"], base, "providers.completion");
    }
    c.weights_path = resolve(base, j.value("weights", std::string()));
    c.strategy = strategy_from_string(j.value("strategy", std::string("learned")));
    c.k_retrieve = j.value("k_retrieve", c.k_retrieve);
    c.k_generate = j.value("k_generate", c.k_generate);
    if (j.contains("generator")) c.generator = backend_from_json(j["generator"], base, "generator");
    if (j.contains("judge")) c.judge = backend_from_json(j["judge"], base, "judge");
    if (j.contains("datetime")) c.datetime = backend_from_json(j["datetime"], base, "datetime");
    c.domains_path = resolve(base, j.value("answer_domains", std::string()));
    c.workers = j.value("workers", c.workers);
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.seed = j.value("seed", c.seed);
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::kConfigError, ex.what());
  } catch (const Error& ex) {
    if (ex.code() == ErrorCode::kConfigError) throw;
    throw Error(ErrorCode::kConfigError, ex.what());
  }
  validate(c);
  return c;
}

EngineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open config " + path.string());
  const auto j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::kConfigError, path.string() + ": invalid JSON");
  return config_from_json(j, path.parent_path());
}

nlohmann::ordered_json to_json(const EngineConfig& c) {
  nlohmann::ordered_json j;
  j["store"] = c.store_path.string();
  nlohmann::ordered_json e;
  e["kind"] = c.embedder.external ? "external" : "builtin";
  if (c.embedder.external) {
    e["endpoint"] = c.embedder.endpoint;
  } else {
    e["dim"] = c.embedder.dim;
    e["bigrams"] = c.embedder.bigrams;
  }
  j["embedder"] = e;
  j["providers"] = {{"ocr", provider_to_json(c.ocr)},
                    {"caption", provider_to_json(c.caption)},
                    {"completion", provider_to_json(c.completion)}};
  j["weights"] = c.weights_path.string();
  j["strategy"] = to_string(c.strategy);
  j["k_retrieve"] = c.k_retrieve;
  j["k_generate"] = c.k_generate;
  j["generator"] = backend_to_json(c.generator);
  j["judge"] = backend_to_json(c.judge);
  j["datetime"] = backend_to_json(c.datetime);
  j["answer_domains"] = c.domains_path.string();
  j["workers"] = c.workers;
  j["seed"] = c.seed;
  return j;
}

std::shared_ptr<TextBackend> make_backend(const BackendConfig& c) {
  switch (c.kind) {
    case BackendKind::kNone:
      return nullptr;
    case BackendKind::kHttp:
      return std::make_shared<HttpTextBackend>(HttpEndpoint{c.endpoint, c.credential_env_var, c.timeout_ms, c.max_retries},
                                               c.max_tokens);
    case BackendKind::kFixture:
      return std::shared_ptr<TextBackend>(FixtureBackend::from_file(c.fixture_path.string()));
    case BackendKind::kTopCandidate:
      return std::make_shared<TopCandidateBackend>();
  }
  return nullptr;
}

std::shared_ptr<Embedder> make_embedder(const EmbedderConfig& c) {
  if (c.external) {
    return std::make_shared<HttpEmbedder>(HttpEndpoint{c.endpoint, c.credential_env_var, c.timeout_ms, c.max_retries});
  }
  return std::make_shared<HashingEmbedder>(c.dim, c.bigrams);
}

}  // namespace memqa
