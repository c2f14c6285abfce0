#include "uq/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace uq::log {
namespace {

std::atomic<Level> g_level{Level::info};
std::ostream* g_sink = nullptr;
std::mutex g_mutex;

const char* tag(Level level) {
  switch (level) {
    case Level::debug: return "[debug] ";
    case Level::info: return "[info] ";
    case Level::warning: return "[warn] ";
    case Level::error: return "[error] ";
  }
  return "";
}

}  // namespace

void set_level(Level level) { g_level = level; }
Level level() { return g_level; }

void set_sink(std::ostream* sink) {
  std::lock_guard lock(g_mutex);
  g_sink = sink;
}

void write(Level level, std::string_view message) {
  if (level < g_level) return;
  std::lock_guard lock(g_mutex);
  std::ostream& out = g_sink ? *g_sink : std::clog;
  out << tag(level) << message << '\n';
}

}  // namespace uq::log
