#pragma once

#include <string>

namespace querysieve {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, ErrorLevel = 3 };

/// Verbosity comes from the QUERYSIEVE_LOG environment variable
/// (debug|info|warn|error, default warn). That is the only environment
/// knob the library reads.
LogLevel log_threshold();

void log_message(LogLevel level, const std::string& msg);

inline void log_debug(const std::string& msg) { log_message(LogLevel::Debug, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::Info, msg); }
inline void log_warn(const std::string& msg) { log_message(LogLevel::Warn, msg); }
inline void log_error(const std::string& msg) { log_message(LogLevel::ErrorLevel, msg); }

} // namespace querysieve
