#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mzlab::detail {

/// Evaluates fn(i) for i in [0, count) on up to `jobs` threads; results are stored by index so
/// the output does not depend on scheduling. The first exception (lowest index) is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, int jobs, Fn&& fn)
{
    std::vector<T> out(count);
    const std::size_t workers = std::min<std::size_t>(std::max(1, jobs), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;
    std::size_t err_index = count;
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    if (err)
        std::rethrow_exception(err);
    return out;
}

} // namespace mzlab::detail
