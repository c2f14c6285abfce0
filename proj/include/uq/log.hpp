#pragma once

#include <iosfwd>
#include <string_view>

namespace uq::log {

enum class Level { debug, info, warning, error };

/// Messages below the threshold are dropped. Default: info.
void set_level(Level level);
Level level();

/// Redirects output; nullptr restores std::clog.
void set_sink(std::ostream* sink);

void write(Level level, std::string_view message);

inline void debug(std::string_view m) { write(Level::debug, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void warning(std::string_view m) { write(Level::warning, m); }
inline void error(std::string_view m) { write(Level::error, m); }

}  // namespace uq::log
