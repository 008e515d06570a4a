#pragma once

#include <string>

namespace conley::log {

enum class Level { quiet = 0, info = 1, debug = 2 };

/// Initial level comes from CONLEY_FRONT_LOG (quiet|info|debug, default info).
/// Throws ConfigError for any other value.
Level level();
void set_level(Level level);
Level parse_level(const std::string& text);

void info(const std::string& message);
void debug(const std::string& message);

}  // namespace conley::log
