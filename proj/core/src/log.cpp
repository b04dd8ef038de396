#include "poresim/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <mutex>

namespace poresim::log {

namespace {

Level parse_env_level() {
    const char* env = std::getenv("PORESIM_LOG");
    if (env == nullptr) return Level::Info;
    if (std::strcmp(env, "debug") == 0) return Level::Debug;
    if (std::strcmp(env, "info") == 0) return Level::Info;
    if (std::strcmp(env, "warn") == 0) return Level::Warn;
    if (std::strcmp(env, "error") == 0) return Level::Error;
    return Level::Info;
}

Level g_threshold = parse_env_level();
std::mutex g_mutex;

const char* tag(Level level) {
    switch (level) {
        case Level::Debug: return "debug";
        case Level::Info: return "info";
        case Level::Warn: return "warn";
        case Level::Error: return "error";
    }
    return "?";
}

} // namespace

Level threshold() { return g_threshold; }

void set_threshold(Level level) { g_threshold = level; }

void write(Level level, const std::string& msg) {
    if (level < g_threshold) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[poresim %s] %s\n", tag(level), msg.c_str());
}

} // namespace poresim::log
