#pragma once

// Deterministic data-parallel helper.  Tasks are indexed; results land in
// index order and the caller merges sequentially, so exact (and MPFR) sums
// are bit-identical for any thread count.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace logcon {

inline unsigned default_thread_count() {
    if (const char* env = std::getenv("LOGCON_THREADS")) {
        long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// Computes fn(i) for i in [0, count) into a vector, in parallel.
template <typename R, typename Fn>
std::vector<R> parallel_map(std::size_t count, Fn&& fn, unsigned threads = 0) {
    if (threads == 0) threads = default_thread_count();
    std::vector<R> out(count);
    if (count == 0) return out;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned nthr = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    pool.reserve(nthr);
    for (unsigned t = 0; t < nthr; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

// Parallel loop with no results; only for side-effect-free-per-index work
// writing to disjoint slots the caller owns.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, unsigned threads = 0) {
    if (threads == 0) threads = default_thread_count();
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned nthr = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    pool.reserve(nthr);
    for (unsigned t = 0; t < nthr; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

} // namespace logcon
