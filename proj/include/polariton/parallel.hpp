#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace polariton
{
//! Worker count for a request of 0 ("use the machine").
inline unsigned resolve_workers(unsigned requested)
{
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/*!
 * Call fn(i) for i in [0, n) on a pool of threads.
 *
 * Indices are handed out dynamically; callers write results by index so
 * that output order never depends on scheduling. The first exception
 * thrown by any task is rethrown after all workers have joined.
 */
template<class F>
void parallel_for(std::size_t n, unsigned workers, F&& fn)
{
    workers = std::min<unsigned>(resolve_workers(workers),
                                 static_cast<unsigned>(std::max<std::size_t>(n, 1)));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t i = next++; i < n; i = next++)
        {
            try
            {
                fn(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = n;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    pool.clear();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace polariton
