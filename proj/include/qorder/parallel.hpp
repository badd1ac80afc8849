#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace qorder
{

//! Worker count to use when the caller asks for 0 ("all available").
inline unsigned resolve_workers(unsigned requested)
{
    if (requested > 0)
    {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/*!
 * Split [0, n) into contiguous chunks and run fn(begin, end) on each.
 *
 * Chunk boundaries depend only on n and the worker count; each index is
 * processed by exactly one call, so results are independent of scheduling.
 * The first exception thrown by any chunk is rethrown after all join.
 */
template<class F>
void parallel_for(std::size_t n, unsigned workers, F&& fn)
{
    workers = static_cast<unsigned>(
        std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1)));
    if (workers <= 1)
    {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
    {
        std::size_t const begin = n * w / workers;
        std::size_t const end = n * (w + 1) / workers;
        pool.emplace_back([&, w, begin, end] {
            try
            {
                fn(begin, end);
            }
            catch (...)
            {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
    {
        t.join();
    }
    for (auto const& e : errors)
    {
        if (e)
        {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace qorder
