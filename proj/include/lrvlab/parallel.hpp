#ifndef LRVLAB_PARALLEL_HPP
#define LRVLAB_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace lrvlab {

/// SplitMix64 mix of (master seed, index); seeds one replication's stream.
inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Worker count used when the caller passes 0.
inline unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs f(index, rng) for index = 0..reps-1, each with its own
/// mt19937_64 seeded from (master, index). Results are returned in index
/// order, so the output does not depend on the worker count.
template <class F>
auto run_replications(std::size_t reps, std::uint64_t master, unsigned workers, F f)
    -> std::vector<decltype(f(std::size_t{}, std::declval<std::mt19937_64&>()))> {
    using R = decltype(f(std::size_t{}, std::declval<std::mt19937_64&>()));
    std::vector<R> out(reps);
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(reps, 1)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= reps) return;
            try {
                std::mt19937_64 rng(stream_seed(master, i));
                out[i] = f(i, rng);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(reps);
                return;
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace lrvlab

#endif
