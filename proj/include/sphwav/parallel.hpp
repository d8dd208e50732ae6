#ifndef SPHWAV_PARALLEL_HPP
#define SPHWAV_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sphwav
{

inline std::size_t worker_count()
{
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Run fn(begin, end, worker) on contiguous chunks of [0, n). The first exception is rethrown.
template < typename F >
void parallel_for(std::size_t n, F&& fn, std::size_t workers = worker_count())
{
    workers = std::max< std::size_t >(1, std::min(workers, n));
    if (workers <= 1)
    {
        if (n > 0)
            fn(std::size_t{0}, n, std::size_t{0});
        return;
    }
    std::vector< std::thread > pool;
    std::vector< std::exception_ptr > errors(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w)
    {
        const std::size_t b = w * chunk, e = std::min(n, b + chunk);
        pool.emplace_back(
            [&, b, e, w]
            {
                try
                {
                    if (b < e)
                        fn(b, e, w);
                }
                catch (...)
                {
                    errors[w] = std::current_exception();
                }
            });
    }
    for (auto& t : pool)
        t.join();
    for (auto& err : errors)
        if (err)
            std::rethrow_exception(err);
}

} // namespace sphwav

#endif
