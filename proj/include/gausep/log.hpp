#pragma once

#include <spdlog/spdlog.h>

namespace gausep {

// Reads GAUSEP_LOG (trace|debug|info|warn|error|off, default warn) once
// and configures a stderr logger.
std::shared_ptr<spdlog::logger> logger();

}  // namespace gausep
