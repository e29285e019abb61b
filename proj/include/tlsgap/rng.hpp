#pragma once

#include <cstdint>

namespace tlsgap {

// Counter-based generator: the k-th output is a pure function of (seed, k),
// so identical seeds reproduce identical streams on every platform that has
// 64-bit integers. Algorithm: splitmix64 (Steele, Lea, Flood 2014).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double next_double(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Deterministic substream seed for (master, stream index) pairs; used for
    // per-seed / per-sweep-point derivation so parallel workers never share a
    // stream.
    static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
        return mix(master ^ mix(stream));
    }

private:
    std::uint64_t state_;
};

} // namespace tlsgap
