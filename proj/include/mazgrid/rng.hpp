#pragma once

#include <cstdint>

namespace mazgrid {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// compact xoshiro-style generator; batch seeds are derived from the root
/// seed by mixing the batch index, so parallel runs merge deterministically
struct Rng64 {
    uint64_t s;
    explicit Rng64(uint64_t seed) : s(seed ? seed : 0x106689d45497fdb5ULL) {}
    uint64_t next() {
        s = splitmix64(s);
        return s;
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    uint32_t below(uint32_t n) { return (uint32_t)(next() % n); }
};

} // namespace mazgrid
