#pragma once

#include <cstdint>
#include <random>

namespace pegf {

// SplitMix64 mixing step (Steele, Lea & Flood). Used to whiten user seeds
// and to derive independent per-replicate streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream seed for replicate `index` of a run keyed by `master`. Stable
// across platforms and independent of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index));
}

// Uniform draw in the open interval (0,1), built directly from the top 53
// bits of the engine output. mt19937_64 output is fully specified by the
// standard, so the stream is bit-identical everywhere.
inline double uniform_open(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace pegf
