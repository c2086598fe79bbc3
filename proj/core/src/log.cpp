#include "shadowtrack/log.hpp"

#include <cstdlib>
#include <memory>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace shadowtrack::log {

namespace {

spdlog::logger& logger() {
  static std::shared_ptr<spdlog::logger> instance = [] {
    auto sink = std::make_shared<spdlog::sinks::stderr_sink_mt>();
    auto l = std::make_shared<spdlog::logger>("shadowtrack", sink);
    l->set_pattern("[%l] %v");
    l->set_level(spdlog::level::warn);
    return l;
  }();
  return *instance;
}

spdlog::level::level_enum to_spdlog(Level level) {
  switch (level) {
    case Level::error:
      return spdlog::level::err;
    case Level::warn:
      return spdlog::level::warn;
    case Level::info:
      return spdlog::level::info;
    case Level::debug:
      return spdlog::level::debug;
  }
  return spdlog::level::warn;
}

}  // namespace

void init_from_env() {
  const char* raw = std::getenv("SHADOWTRACK_LOG");
  const std::string value = raw ? raw : "";
  Level level = Level::warn;
  if (value == "error") {
    level = Level::error;
  } else if (value == "info") {
    level = Level::info;
  } else if (value == "debug") {
    level = Level::debug;
  }
  set_level(level);
}

void set_level(Level level) { logger().set_level(to_spdlog(level)); }

void error(std::string_view message) { logger().error("{}", message); }
void warn(std::string_view message) { logger().warn("{}", message); }
void info(std::string_view message) { logger().info("{}", message); }
void debug(std::string_view message) { logger().debug("{}", message); }

}  // namespace shadowtrack::log
