#include "poresim/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace poresim {

namespace {

int parse_env_threads() {
    const char* env = std::getenv("PORESIM_THREADS");
    if (env == nullptr) return 1;
    const int n = std::atoi(env);
    return n > 0 ? n : 1;
}

int g_threads = parse_env_threads();

} // namespace

int thread_count() { return g_threads; }

void set_thread_count(int n) { g_threads = std::max(1, n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(static_cast<std::size_t>(g_threads), n);
    if (workers <= 1 || n < 4096) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    const std::size_t chunk = (n + static_cast<size_t>(workers) - 1) / static_cast<size_t>(workers);
    for (int w = 0; w < workers; ++w) {
        const std::size_t begin = static_cast<size_t>(w) * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace poresim
