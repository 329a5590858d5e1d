#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace logconv {

/* Worker count: LOGCONV_THREADS caps the pool, default = hardware. */
inline int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("LOGCONV_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

/* Static chunking over [0, n).  Chunk boundaries depend only on n, never on
   the worker count, so per-chunk results can be reduced in a fixed order and
   outputs stay byte-identical across thread configurations. */
inline std::vector<std::pair<long, long>> fixed_chunks(long n, long chunk = 0) {
    if (chunk <= 0) chunk = std::max<long>(1, n / 64);
    std::vector<std::pair<long, long>> out;
    for (long lo = 0; lo < n; lo += chunk) out.push_back({lo, std::min(n, lo + chunk)});
    return out;
}

inline void parallel_for(long n, const std::function<void(long)>& body) {
    int workers = worker_count();
    if (n <= 1 || workers <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<long> next{0};
    long chunk = std::max<long>(1, n / (8L * workers));
    auto run = [&]() {
        for (;;) {
            long lo = next.fetch_add(chunk);
            if (lo >= n) return;
            long hi = std::min(n, lo + chunk);
            for (long i = lo; i < hi; ++i) body(i);
        }
    };
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
}

/* Map chunks to partial results, then reduce sequentially in chunk order. */
template <typename T>
T parallel_chunk_reduce(long n, long chunk, T init,
                        const std::function<T(long, long)>& map,
                        const std::function<T(const T&, const T&)>& reduce) {
    auto chunks = fixed_chunks(n, chunk);
    std::vector<T> partial(chunks.size(), init);
    parallel_for(static_cast<long>(chunks.size()), [&](long ci) {
        partial[static_cast<size_t>(ci)] = map(chunks[static_cast<size_t>(ci)].first,
                                               chunks[static_cast<size_t>(ci)].second);
    });
    T acc = init;
    for (const T& p : partial) acc = reduce(acc, p);
    return acc;
}

} // namespace logconv
