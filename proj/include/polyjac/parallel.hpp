#ifndef POLYJAC_PARALLEL_HPP
#define POLYJAC_PARALLEL_HPP

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace polyjac {

/// Worker budget: explicit request > POLYJAC_THREADS > hardware concurrency.
inline unsigned resolve_thread_count(unsigned requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("POLYJAC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Run fn(chunk_index, begin, end) over contiguous chunks of [begin, end).
/// Callers own determinism: combine per-chunk results in chunk order, or use
/// per-element output slots.
template <typename Fn>
void parallel_chunks(uint64_t begin, uint64_t end, unsigned threads, Fn&& fn) {
    if (begin >= end) return;
    const uint64_t n = end - begin;
    unsigned t = std::max(1u, threads);
    t = static_cast<unsigned>(std::min<uint64_t>(t, n));
    if (t == 1) {
        fn(0u, begin, end);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(t);
    const uint64_t chunk = (n + t - 1) / t;
    for (unsigned k = 0; k < t; ++k) {
        const uint64_t lo = begin + chunk * k;
        const uint64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        workers.emplace_back([&fn, k, lo, hi] { fn(k, lo, hi); });
    }
    for (auto& w : workers) w.join();
}

} // namespace polyjac

#endif
