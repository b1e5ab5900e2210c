#include "querysieve/log.hpp"

#include <cstdlib>
#include <iostream>

namespace querysieve {

LogLevel log_threshold() {
    static LogLevel level = [] {
        const char* env = std::getenv("QUERYSIEVE_LOG");
        if (env == nullptr) return LogLevel::Warn;
        std::string v(env);
        if (v == "debug") return LogLevel::Debug;
        if (v == "info") return LogLevel::Info;
        if (v == "warn") return LogLevel::Warn;
        if (v == "error") return LogLevel::ErrorLevel;
        return LogLevel::Warn;
    }();
    return level;
}

void log_message(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) < static_cast<int>(log_threshold())) return;
    const char* tag = "warn";
    switch (level) {
        case LogLevel::Debug: tag = "debug"; break;
        case LogLevel::Info: tag = "info"; break;
        case LogLevel::Warn: tag = "warn"; break;
        case LogLevel::ErrorLevel: tag = "error"; break;
    }
    std::cerr << tag << ": " << msg << '\n';
}

} // namespace querysieve
