#include "bvf/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <string>

namespace bvf::log {

Level threshold() {
  static const Level level = [] {
    const char* env = std::getenv("BVF_LOG");
    if (env == nullptr) return Level::Warn;
    const std::string v(env);
    if (v == "error") return Level::Error;
    if (v == "info") return Level::Info;
    if (v == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

bool enabled(Level level) { return static_cast<int>(level) <= static_cast<int>(threshold()); }

void write(Level level, std::string_view message) {
  if (!enabled(level)) return;
  static constexpr const char* kTags[] = {"error", "warn", "info", "debug"};
  static std::mutex mutex;
  std::lock_guard lock(mutex);
  std::cerr << "[bvf " << kTags[static_cast<int>(level)] << "] " << message << '\n';
}

}  // namespace bvf::log
