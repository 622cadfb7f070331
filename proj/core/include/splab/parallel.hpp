#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace splab {

namespace detail {
inline std::atomic<unsigned>& max_threads_setting()
{
    static std::atomic<unsigned> value{0};
    return value;
}
} // namespace detail

// Caps the worker count used by parallel_for. 0 means hardware concurrency.
inline void set_max_threads(unsigned n) { detail::max_threads_setting() = n; }

[[nodiscard]] inline unsigned max_threads()
{
    unsigned n = detail::max_threads_setting();
    if (n == 0) {
        n = std::max(1u, std::thread::hardware_concurrency());
    }
    return n;
}

//! Runs body(i) for i in [0, count). Each index is processed exactly once
//! by one worker; callers write results into per-index slots, so output is
//! independent of scheduling. The first exception thrown by any body is
//! rethrown on the calling thread.
template<class Body>
void parallel_for(std::size_t count, Body&& body)
{
    const std::size_t workers = std::min<std::size_t>(max_threads(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
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
                next = count;
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(run);
    }
    run();
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

} // namespace splab
