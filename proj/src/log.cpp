#include "endure/log.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>

namespace endure::log {

namespace {

Level g_threshold = [] {
    const char* env = std::getenv("ENDURE_LOG");
    if (!env) return Level::warn;
    if (!std::strcmp(env, "error")) return Level::error;
    if (!std::strcmp(env, "warn")) return Level::warn;
    if (!std::strcmp(env, "info")) return Level::info;
    if (!std::strcmp(env, "debug")) return Level::debug;
    return Level::warn;
}();

std::mutex g_mutex;
std::ofstream g_sidecar;

const char* name(Level lv) {
    switch (lv) {
        case Level::error: return "error";
        case Level::warn: return "warn";
        case Level::info: return "info";
        case Level::debug: return "debug";
    }
    return "?";
}

}  // namespace

Level threshold() { return g_threshold; }
void set_threshold(Level lv) { g_threshold = lv; }

void open_sidecar(const std::string& path) {
    std::lock_guard<std::mutex> lock(g_mutex);
    g_sidecar.open(path, std::ios::app);
}

void close_sidecar() {
    std::lock_guard<std::mutex> lock(g_mutex);
    if (g_sidecar.is_open()) g_sidecar.close();
}

void write(Level lv, const std::string& msg) {
    if (lv > g_threshold) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[%s] %s\n", name(lv), msg.c_str());
    if (g_sidecar.is_open()) {
        auto now = std::chrono::system_clock::now().time_since_epoch();
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
        g_sidecar << ms << " [" << name(lv) << "] " << msg << '\n';
        g_sidecar.flush();
    }
}

}  // namespace endure::log
