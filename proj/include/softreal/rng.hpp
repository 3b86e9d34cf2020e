// Counter-based deterministic RNG utilities.
//
// Every random decision in the library is a pure function of a small key
// tuple (seed, stream, index, ...), so Monte-Carlo results do not depend on
// evaluation order, trial partitioning, or thread schedule.

#pragma once

#include <cstdint>
#include <cmath>

namespace softreal {

// splitmix64 finalizer; full-period bijective mix on 64 bits.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (0x9e3779b97f4a7c15ULL + (b << 6) + (b >> 2) + mix64(b)));
}

constexpr std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return hash_mix(hash_mix(a, b), c);
}

constexpr std::uint64_t hash_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c,
                                 std::uint64_t d) {
    return hash_mix(hash_mix(a, b), hash_mix(c, d ^ 0xd1b54a32d192ed03ULL));
}

// Uniform double in [0, 1) from a 64-bit word (53-bit mantissa).
constexpr double to_unit_double(std::uint64_t u) {
    return static_cast<double>(u >> 11) * 0x1.0p-53;
}

// Threshold such that (draw < threshold) fires with probability ~p.
// p >= 1 is the sentinel UINT64_MAX and must be paired with <=.
inline std::uint64_t flip_threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return ~0ULL;
    long double scaled = std::ldexp(static_cast<long double>(p), 64);
    if (scaled >= 0x1.0p64l) return ~0ULL;
    return static_cast<std::uint64_t>(scaled);
}

// True iff the per-site draw for (seed, trial, site) fires at probability p.
// p == 1 always fires, p == 0 never does.
inline bool bernoulli_site(std::uint64_t seed, std::uint64_t trial, std::uint64_t site,
                           std::uint64_t threshold) {
    if (threshold == 0) return false;
    std::uint64_t u = hash_mix(seed, trial, site);
    if (threshold == ~0ULL) return true;
    return u < threshold;
}

// An indexable stream of 64-bit words keyed by (seed, stream id).
class CounterStream {
public:
    CounterStream(std::uint64_t seed, std::uint64_t stream)
        : key_(hash_mix(seed, stream)) {}

    std::uint64_t word(std::uint64_t index) const { return mix64(key_ ^ mix64(index)); }
    double unit(std::uint64_t index) const { return to_unit_double(word(index)); }

    // Uniform integer in [0, bound); bound > 0.
    std::uint64_t below(std::uint64_t index, std::uint64_t bound) const {
        return word(index) % bound;
    }

private:
    std::uint64_t key_;
};

} // namespace softreal
