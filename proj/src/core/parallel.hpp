#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace permsync {

/// Runs fn(0), ..., fn(n-1) across a small thread pool. Work items must be
/// independent; callers that need deterministic aggregation should write
/// results into per-index slots and reduce after the call returns. The first
/// exception thrown by any item is rethrown on the calling thread.
inline void parallel_for(int n, const std::function<void(int)>& fn, int max_threads = 0) {
    if (n <= 0) return;
    int threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    if (max_threads > 0 && threads > max_threads) threads = max_threads;
    if (threads > n) threads = n;

    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) break;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true, std::memory_order_relaxed);
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace permsync
