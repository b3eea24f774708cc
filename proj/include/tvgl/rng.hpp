#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace tvgl {

/// splitmix64 finalizer; used to derive independent engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Compile-time tag for naming RNG streams ("trajectory", "sample", ...).
constexpr std::uint64_t stream_tag(const char* name) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (const char* c = name; *c != '\0'; ++c) {
        h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(*c));
        h *= 0x00000100000001b3ULL;
    }
    return h;
}

// Deterministic random stream. Streams derived from the same seed but
// different (tag, index) pairs are independent for practical purposes, so
// consumers can draw in parallel without sharing state. normal() applies
// Box-Muller to the engine's uniforms rather than routing through
// std::normal_distribution, whose algorithm is implementation-defined;
// output therefore depends only on the seed and the standard-specified
// mt19937_64 sequence.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    static Rng substream(std::uint64_t seed, std::uint64_t tag,
                         std::uint64_t index = 0) {
        return Rng(splitmix64(seed) ^ splitmix64(tag ^ splitmix64(index)));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform index in [0, n); rejection sampling removes modulo bias.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t nn = static_cast<std::uint64_t>(n);
        const std::uint64_t bound = ~std::uint64_t{0} - (~std::uint64_t{0} % nn);
        std::uint64_t v = next_u64();
        while (v >= bound) v = next_u64();
        return static_cast<std::size_t>(v % nn);
    }

    /// Standard normal draw (Box-Muller; the paired draw is cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // in (0, 1], keeps log finite
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tvgl
