#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace dendro {

// Worker count: DENDRODYN_THREADS when set to a positive integer, otherwise
// the hardware concurrency.
inline std::size_t thread_count() {
    if (const char* env = std::getenv("DENDRODYN_THREADS")) {
        try {
            long n = std::stol(env);
            if (n > 0) return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

// Runs body(i) for i in [0, n). Indices are handed out dynamically; results
// must be written to per-index slots by the caller. The first exception is
// rethrown after all workers stop.
template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t threads = thread_count()) {
    threads = std::min(threads, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace dendro
