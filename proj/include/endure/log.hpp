#ifndef ENDURE_LOG_HPP
#define ENDURE_LOG_HPP

#include <string>

namespace endure::log {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

// Threshold comes from ENDURE_LOG (error|warn|info|debug), default warn.
Level threshold();
void set_threshold(Level lv);

// Mirrors every message at or below the threshold to stderr; if a sidecar
// file was opened, also appends there with a timestamp (stderr stays
// timestamp-free so command output is reproducible).
void open_sidecar(const std::string& path);
void close_sidecar();

void write(Level lv, const std::string& msg);
inline void error(const std::string& m) { write(Level::error, m); }
inline void warn(const std::string& m) { write(Level::warn, m); }
inline void info(const std::string& m) { write(Level::info, m); }
inline void debug(const std::string& m) { write(Level::debug, m); }

}  // namespace endure::log

#endif
