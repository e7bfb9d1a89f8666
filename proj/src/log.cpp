#include "mwdp/log.hpp"

#include <cstdlib>
#include <string>

namespace mwdp {

LogLevel log_level() {
    static LogLevel level = [] {
        const char* env = std::getenv("DP_LOG_LEVEL");
        if (!env) return LogLevel::error;
        std::string v(env);
        if (v == "debug") return LogLevel::debug;
        if (v == "info") return LogLevel::info;
        return LogLevel::error;
    }();
    return level;
}

} // namespace mwdp
