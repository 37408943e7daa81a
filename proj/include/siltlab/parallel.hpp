#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace siltlab {

// Worker count: SILTLAB_THREADS if set, hardware otherwise.
inline unsigned default_threads() {
    if (const char* env = std::getenv("SILTLAB_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

// Deterministic replica-parallel fold. Items are split into fixed chunks;
// each chunk is folded sequentially by one worker, and chunk results are
// combined in chunk order, so the result does not depend on the worker count.
template <class T, class Work, class Combine>
T parallel_fold(std::uint64_t n_items, std::uint64_t chunk_size, T init, Work&& work,
                Combine&& combine, unsigned threads = default_threads()) {
    if (n_items == 0) return init;
    if (chunk_size == 0) chunk_size = 1;
    const std::uint64_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
    std::vector<T> partial(n_chunks, init);
    std::atomic<std::uint64_t> next{0};
    auto body = [&]() {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            T acc = init;
            const std::uint64_t lo = c * chunk_size;
            const std::uint64_t hi = std::min(n_items, lo + chunk_size);
            for (std::uint64_t i = lo; i < hi; ++i) work(i, acc);
            partial[c] = acc;
        }
    };
    if (threads <= 1 || n_chunks == 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        unsigned n = std::min<std::uint64_t>(threads, n_chunks);
        pool.reserve(n);
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(body);
        for (auto& th : pool) th.join();
    }
    T out = init;
    for (auto& p : partial) combine(out, p);
    return out;
}

// Runs work(i) for i in [0, n) on the pool; used when workers write to
// disjoint pre-sized slots.
template <class Work>
void parallel_for(std::uint64_t n_items, Work&& work, unsigned threads = default_threads()) {
    struct Nothing {};
    parallel_fold<Nothing>(
        n_items, 1, Nothing{}, [&](std::uint64_t i, Nothing&) { work(i); },
        [](Nothing&, const Nothing&) {}, threads);
}

}  // namespace siltlab
