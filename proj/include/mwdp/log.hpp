#pragma once

#include <iostream>
#include <sstream>

namespace mwdp {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Process-wide log threshold, initialized once from DP_LOG_LEVEL
/// (error | info | debug; default error).
LogLevel log_level();

} // namespace mwdp

#define MWDP_LOG_AT(level, tag, expr)                                        \
    do {                                                                     \
        if (::mwdp::log_level() >= level) {                                  \
            std::ostringstream mwdp_log_os;                                  \
            mwdp_log_os << tag << expr << '\n';                              \
            std::cerr << mwdp_log_os.str();                                  \
        }                                                                    \
    } while (0)

#define MWDP_LOG_ERROR(expr) MWDP_LOG_AT(::mwdp::LogLevel::error, "[error] ", expr)
#define MWDP_LOG_INFO(expr) MWDP_LOG_AT(::mwdp::LogLevel::info, "[info] ", expr)
#define MWDP_LOG_DEBUG(expr) MWDP_LOG_AT(::mwdp::LogLevel::debug, "[debug] ", expr)
