#pragma once

#include <cstdint>

namespace logconv {

/* Counter-based generator: the value drawn for (seed, index) never depends on
   how many draws happened before, so parallel sampling stays reproducible. */
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct CounterRng {
    uint64_t seed = 0;

    uint64_t bits(uint64_t index, uint64_t stream = 0) const {
        return splitmix64(splitmix64(seed ^ (0xa0761d6478bd642fULL * (stream + 1))) + index);
    }
    /* Uniform in [0,1). */
    double uniform(uint64_t index, uint64_t stream = 0) const {
        return static_cast<double>(bits(index, stream) >> 11) * 0x1.0p-53;
    }
    double uniform(uint64_t index, uint64_t stream, double lo, double hi) const {
        return lo + (hi - lo) * uniform(index, stream);
    }
    /* Uniform integer in [0, n). */
    uint64_t pick(uint64_t index, uint64_t stream, uint64_t n) const {
        return bits(index, stream) % n;
    }
};

/* Small sequential generator for test-local sampling. */
struct SeqRng {
    uint64_t state;
    explicit SeqRng(uint64_t seed) : state(splitmix64(seed ^ 0x5851f42d4c957f2dULL)) {}
    uint64_t next() {
        state = splitmix64(state);
        return state;
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    int pick(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

} // namespace logconv
