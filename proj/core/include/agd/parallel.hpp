#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace agd {

// Number of worker threads to use: AGD_THREADS env var if set, otherwise
// hardware concurrency. A requested value <= 0 also falls back to this.
inline int default_threads() {
    if (const char* env = std::getenv("AGD_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

inline int resolve_threads(int requested) {
    return requested > 0 ? requested : default_threads();
}

// Run fn(i) for i in [0, count). Each index is processed exactly once; the
// caller's fn must only write to per-index state. Exceptions are captured
// and the first one rethrown on the calling thread.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                         int threads = 0) {
    int nthreads = resolve_threads(threads);
    if (count == 0) return;
    if (nthreads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    nthreads = static_cast<int>(std::min<std::size_t>(nthreads, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

}  // namespace agd
