#ifndef MIXINF_PARALLEL_HPP
#define MIXINF_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mixinf {

/**
 * Calls body(i) for i in [0, count) on a small thread pool. Results must be
 * written by index so the outcome does not depend on scheduling. The first
 * exception thrown by any call is rethrown after all threads join.
 */
template <typename Body>
void parallel_for(std::size_t count, Body&& body, unsigned max_threads = 0)
{
    unsigned threads = max_threads ? max_threads : std::thread::hardware_concurrency();
    threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace mixinf

#endif
