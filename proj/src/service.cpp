#include "memqa/service.hpp"

#include <httplib.h>

#include "memqa/calendar.hpp"
#include "memqa/engine.hpp"
#include "memqa/error.hpp"
#include "memqa/log.hpp"

namespace memqa {

namespace {

HttpReply error_reply(int status, const Error& e) {
  nlohmann::ordered_json body;
  body["error"] = to_string(e.code());
  body["message"] = e.what();
  return {status, body};
}

HttpReply bad_request(const std::string& message) {
  return error_reply(400, Error(ErrorCode::kInvalidArgument, message));
}

std::optional<nlohmann::json> parse_body(const std::string& body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

}  // namespace

HttpReply handle_record(Engine& engine, const std::string& body) {
  auto j = parse_body(body);
  if (!j) return bad_request("body must be a JSON object");
  bool augment = false;
  if (j->contains("augment")) {
    if (!(*j)["augment"].is_boolean()) return bad_request("augment must be a boolean");
    augment = (*j)["augment"].get<bool>();
    j->erase("augment");
  }
  try {
    const auto entry = entry_from_json(*j);
    std::vector<std::string> warnings;
    nlohmann::ordered_json out;
    out["id"] = engine.record(entry, augment, &warnings);
    out["augmented"] = augment;
    if (!warnings.empty()) out["warnings"] = warnings;
    return {201, out};
  } catch (const AugmentationError& e) {
    auto reply = error_reply(502, e);
    auto details = nlohmann::ordered_json::array();
    for (const auto& [provider, message] : e.details()) details.push_back({{"provider", provider}, {"error", message}});
    reply.body["details"] = details;
    return reply;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kDuplicateId: return error_reply(409, e);
      case ErrorCode::kInvalidEntry:
      case ErrorCode::kInvalidArgument: return error_reply(400, e);
      case ErrorCode::kProviderUnavailable:
      case ErrorCode::kTimeout:
      case ErrorCode::kMalformedProviderOutput:
      case ErrorCode::kEncoderUnavailable: return error_reply(502, e);
      default: return error_reply(500, e);
    }
  } catch (const std::exception& e) {
    return bad_request(e.what());
  }
}

HttpReply handle_query(const Engine& engine, const std::string& body) {
  const auto j = parse_body(body);
  if (!j) return bad_request("body must be a JSON object");
  if (!j->contains("question") || !(*j)["question"].is_string()) return bad_request("missing question");
  if (!j->contains("asked_at")) return bad_request("missing asked_at");

  RecallQuery q;
  q.text = (*j)["question"].get<std::string>();
  const auto& at = (*j)["asked_at"];
  if (at.is_number_integer()) {
    q.asked_at = at.get<std::int64_t>();
  } else if (at.is_string()) {
    auto parsed = parse_iso_instant(at.get<std::string>());
    if (!parsed) return bad_request("asked_at is not an ISO-8601 instant");
    q.asked_at = *parsed;
  } else {
    return bad_request("asked_at must be epoch seconds or an ISO-8601 string");
  }
  const auto tz = j->value("tz_offset_minutes", nlohmann::json(0));
  if (!tz.is_number_integer()) return bad_request("tz_offset_minutes must be an integer");
  q.timezone_offset_minutes = tz.get<int>();
  const auto mode = j->value("mode", std::string("retrieve"));
  if (mode != "retrieve" && mode != "answer") return bad_request("mode must be retrieve or answer");
  std::optional<std::size_t> k;
  if (j->contains("k")) {
    if (!(*j)["k"].is_number_unsigned() || (*j)["k"].get<std::size_t>() == 0) return bad_request("k must be positive");
    k = (*j)["k"].get<std::size_t>();
  }

  try {
    auto result = engine.query(q, mode == "answer", k);
    nlohmann::ordered_json out;
    out["question"] = q.text;
    out["asked_at"] = q.asked_at;
    out["mode"] = mode;
    const auto fields = to_json(result);
    for (const auto& [key, value] : fields.items()) out[key] = value;
    return {200, out};
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::kInvalidArgument:
      case ErrorCode::kTooManyCandidates: return error_reply(400, e);
      case ErrorCode::kBackendUnavailable:
      case ErrorCode::kTimeout:
      case ErrorCode::kEncoderUnavailable: return error_reply(503, e);
      default: return error_reply(500, e);
    }
  } catch (const std::exception& e) {
    return error_reply(500, Error(ErrorCode::kInvalidArgument, e.what()));
  }
}

HttpReply handle_health(const Engine& engine) {
  nlohmann::ordered_json out;
  out["status"] = "ok";
  out["memories"] = engine.store().size();
  return {200, out};
}

void install_routes(httplib::Server& server, Engine& engine) {
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };
  server.Post("/v1/memories", [&engine, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_record(engine, req.body));
  });
  server.Post("/v1/query", [&engine, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_query(engine, req.body));
  });
  server.Get("/healthz", [&engine, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_health(engine));
  });
}

bool serve(Engine& engine, const std::string& host, int port) {
  httplib::Server server;
  install_routes(server, engine);
  log::info("listening on " + host + ":" + std::to_string(port));
  return server.listen(host, port);
}

}  // namespace memqa
