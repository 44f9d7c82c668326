#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace netform {

// Runs fn(0..jobs-1), each job exactly once. Jobs must be independent and
// write only to their own slots; results are then identical for any thread
// count. threads <= 1 degrades to a plain loop.
inline void parallel_for(std::size_t jobs, int threads, const std::function<void(std::size_t)>& fn) {
    if (jobs == 0) return;
    if (threads <= 1 || jobs == 1) {
        for (std::size_t k = 0; k < jobs; ++k) fn(k);
        return;
    }
    const std::size_t nworkers = std::min<std::size_t>(static_cast<std::size_t>(threads), jobs);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (std::size_t w = 0; w < nworkers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t k = next.fetch_add(1);
                if (k >= jobs || failed.load()) return;
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace netform
