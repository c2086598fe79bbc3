#pragma once

#include <string_view>

namespace shadowtrack::log {

enum class Level { error, warn, info, debug };

/// Reads SHADOWTRACK_LOG (error|warn|info|debug) and configures the
/// process-wide stderr logger. Unset or unrecognized values mean `warn`.
void init_from_env();

void set_level(Level level);

void error(std::string_view message);
void warn(std::string_view message);
void info(std::string_view message);
void debug(std::string_view message);

}  // namespace shadowtrack::log
