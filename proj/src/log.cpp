#include "tubeband/log.hpp"

#include <cstdlib>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace tubeband {

std::shared_ptr<spdlog::logger> logger() {
    static const std::shared_ptr<spdlog::logger> instance = [] {
        auto l = spdlog::stderr_logger_mt("tubeband");
        l->set_pattern("[%l] %v");
        auto level = spdlog::level::err;
        if (const char* env = std::getenv("TUBEBAND_LOG")) {
            const std::string v(env);
            const auto parsed = spdlog::level::from_str(v);
            if (parsed != spdlog::level::off || v == "off") level = parsed;
        }
        l->set_level(level);
        return l;
    }();
    return instance;
}

}  // namespace tubeband
