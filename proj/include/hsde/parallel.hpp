#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace hsde {

// Worker count from HSDE_WORKERS, else the hardware concurrency.
inline int worker_count() {
    if (const char* env = std::getenv("HSDE_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Calls body(begin, end, worker) on contiguous index ranges. Results must be
// written to per-index slots so the outcome is independent of the worker count.
template <class F>
void parallel_ranges(std::size_t n, F&& body, int workers = 0) {
    if (workers <= 0) workers = worker_count();
    const std::size_t w = std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(n, 1));
    if (w <= 1) {
        body(std::size_t{0}, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex m;
    const std::size_t chunk = (n + w - 1) / w;
    for (std::size_t k = 0; k < w; ++k) {
        const std::size_t b = k * chunk, e = std::min(n, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&, b, e, k] {
            try {
                body(b, e, static_cast<int>(k));
            } catch (...) {
                std::lock_guard<std::mutex> lk(m);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace hsde
