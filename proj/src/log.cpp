#include "gausep/log.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>

#include <cstdlib>

namespace gausep {

std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> lg = [] {
    auto l = spdlog::stderr_color_mt("gausep");
    const char* env = std::getenv("GAUSEP_LOG");
    l->set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
    l->set_pattern("[%l] %v");
    return l;
  }();
  return lg;
}

}  // namespace gausep
