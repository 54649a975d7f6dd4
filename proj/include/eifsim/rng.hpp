#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace eifsim {

// SplitMix64: deterministic across platforms, unlike the distributions in
// <random>. Every stochastic component in the project draws from one of
// these, seeded explicitly.
struct SplitMix64 {
    std::uint64_t s;

    explicit SplitMix64(std::uint64_t seed = 0x9E3779B97F4A7C15ULL) : s(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (s += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Rejection-free modulo is fine at our scales.
    std::uint64_t uniform(std::uint64_t n) { return n ? next() % n : 0; }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(uniform(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double next01() { return (next() >> 11) * (1.0 / 9007199254740992.0); }

    // Box-Muller; used for pseudo-embedding construction.
    double normal() {
        double u1 = next01();
        double u2 = next01();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform(i));
            std::swap(v[i - 1], v[j]);
        }
    }
};

// Stable mixing of several seed components into one stream seed.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
    SplitMix64 m(a ^ 0xA24BAED4963EE407ULL);
    m.s += b;
    std::uint64_t h = m.next();
    m.s += c;
    return h ^ m.next();
}

}  // namespace eifsim
