#ifndef NSC_PARALLEL_HPP_
#define NSC_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace nsc {

/// Worker count to use when the caller passes 0.
inline int default_thread_count() noexcept {
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Runs body(i) for i in [0, count) on up to `threads` workers.
///
/// Each index runs exactly once; callers write results into per-index slots,
/// so output never depends on scheduling. The first exception is rethrown.
template <typename Body>
void parallel_for(std::ptrdiff_t count, int threads, Body &&body) {
    if (threads <= 0) {
        threads = default_thread_count();
    }
    threads = static_cast<int>(std::min<std::ptrdiff_t>(threads, count));
    if (threads <= 1) {
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::ptrdiff_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::ptrdiff_t i = next.fetch_add(1);
            if (i >= count) {
                return;
            }
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(count);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    for (auto &thread : pool) {
        thread.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace nsc

#endif  // NSC_PARALLEL_HPP_
