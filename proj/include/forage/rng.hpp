#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace forage {

// splitmix64-based generator. The std <random> distributions are
// implementation-defined, so every draw here is spelled out explicitly:
// identical seeds give identical streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform integer in [0, n), n > 0
    std::uint64_t next_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Box-Muller, one sample per call so the stream layout stays simple
    double gaussian(double mean, double sd) {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        double u2 = next_double();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    bool chance(double p) { return next_double() < p; }

private:
    std::uint64_t state_;
};

// Hashes (base, parts...) into a child seed so nested experiments get
// non-overlapping streams. Used for per-genome trial seeds: the seed of
// trial k for genome g in generation t is a pure function of the master
// seed and (t, g, k).
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> parts) {
    Rng mix(base ^ 0x6a09e667f3bcc908ULL);
    std::uint64_t h = mix.next_u64();
    for (std::uint64_t p : parts) {
        Rng step(h ^ (p + 0x9e3779b97f4a7c15ULL));
        h = step.next_u64();
    }
    return h;
}

} // namespace forage
