#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace lcu {

/// Thread cap from LCU_THREADS. Unset, 0, or 1 all mean serial execution.
inline int thread_limit() {
    const char* env = std::getenv("LCU_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) return 1;
    if (v == 0) return 1;
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return static_cast<int>(std::min<long>(v, hw));
}

/// Run fn(k) for k in [0, count) on up to `threads` threads. Each index is
/// handled exactly once; fn must only write state owned by its index, which
/// keeps results identical to the serial order.
template <class Fn>
inline void for_each_index(int count, int threads, Fn&& fn) {
    if (threads <= 1 || count <= 1) {
        for (int k = 0; k < count; ++k) fn(k);
        return;
    }
    int n = std::min(threads, count);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w)
        pool.emplace_back([&fn, w, n, count] {
            for (int k = w; k < count; k += n) fn(k);
        });
    for (auto& th : pool) th.join();
}

}  // namespace lcu
