#pragma once

#include <string>

#include <json.hpp>

namespace httplib {
class Server;
}

namespace memqa {

class Engine;

struct HttpReply {
  int status = 200;
  nlohmann::ordered_json body;
};

// Transport-free handlers; the routes below are thin wrappers.
HttpReply handle_record(Engine& engine, const std::string& body);
HttpReply handle_query(const Engine& engine, const std::string& body);
HttpReply handle_health(const Engine& engine);

// POST /v1/memories, POST /v1/query, GET /healthz.
void install_routes(httplib::Server& server, Engine& engine);

// Blocks until the server stops.
bool serve(Engine& engine, const std::string& host, int port);

}  // namespace memqa
