#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dsom {

/// splitmix64 finalizer; used for seed derivation and counter-based draws.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a stream tag.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag) {
    return splitmix64(base ^ splitmix64(tag));
}

/// Deterministic RNG. mt19937_64 output is pinned by the standard, and the
/// bounded-int / real mappings below are ours, so identical seeds give
/// identical sequences on every platform and compiler.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
    int uniform_int(int lo, int hi) {
        const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return lo + static_cast<int>(x % range);
    }

    std::size_t uniform_index(std::size_t n) {
        return static_cast<std::size_t>(uniform_int(0, static_cast<int>(n) - 1));
    }

    /// Fisher-Yates shuffle driven by uniform_int, so it is seed-stable.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

/// Counter-based uniform draw in [0, 1): a pure function of (seed, a, b).
/// Used for per-(node, tick) failure draws so that raising the failure rate
/// only ever adds failure events for a fixed seed.
inline double hash_uniform(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(a ^ 0x51a5c747a3b5e1dbULL) ^ splitmix64(b ^ 0x9d2c5680e4f1a6c3ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

} // namespace dsom
