#include "memqa/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace memqa::log {

namespace {

Level initial_level() {
  const char* env = std::getenv("MEMQA_LOG");
  if (!env) return Level::kWarn;
  const std::string v(env);
  if (v == "debug") return Level::kDebug;
  if (v == "info") return Level::kInfo;
  if (v == "error") return Level::kError;
  if (v == "off") return Level::kOff;
  return Level::kWarn;
}

std::atomic<Level>& current() {
  static std::atomic<Level> level{initial_level()};
  return level;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void set_level(Level level) { current().store(level); }
Level level() { return current().load(); }

void write(Level lvl, std::string_view message) {
  if (lvl < current().load()) return;
  static constexpr const char* kTags[] = {"debug", "info", "warn", "error"};
  std::lock_guard lock(sink_mutex());
  std::cerr << "[memqa " << kTags[static_cast<int>(lvl)] << "] " << message << '\n';
}

}  // namespace memqa::log
