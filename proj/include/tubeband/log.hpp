#pragma once

#include <memory>

#include <spdlog/logger.h>

namespace tubeband {

/// Process-wide stderr logger. Level comes from TUBEBAND_LOG
/// (error, info, debug); unset or unrecognised means error.
std::shared_ptr<spdlog::logger> logger();

}  // namespace tubeband
