// Sign-magnitude fixed-point values. Quantization is round-to-nearest with
// ties away from zero, saturating at the format limits.

#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace softreal {

struct FixedPointFormat {
    std::uint32_t wl = 9;   // magnitude bits
    std::uint32_t frac = 8; // fraction bits, frac <= wl <= 16

    void check() const {
        if (wl < 1 || wl > 16 || frac > wl)
            throw std::invalid_argument("fixed-point format requires 0 <= frac <= wl <= 16");
    }
    std::uint32_t max_mag() const { return (1u << wl) - 1; }
    double resolution() const { return std::ldexp(1.0, -static_cast<int>(frac)); }
    double max_value() const { return max_mag() * resolution(); }
};

struct FixedValue {
    std::uint32_t mag = 0;
    bool neg = false;

    bool operator==(const FixedValue&) const = default;
};

inline FixedValue quantize(const FixedPointFormat& f, double x) {
    const double scaled = std::fabs(x) * std::ldexp(1.0, static_cast<int>(f.frac));
    double m = std::floor(scaled + 0.5); // ties away from zero on the magnitude
    if (m > f.max_mag()) m = f.max_mag();
    FixedValue v;
    v.mag = static_cast<std::uint32_t>(m);
    v.neg = x < 0 && v.mag != 0;
    return v;
}

inline double to_real(const FixedPointFormat& f, const FixedValue& v) {
    const double r = v.mag * f.resolution();
    return v.neg ? -r : r;
}

inline std::int64_t to_signed(const FixedValue& v) {
    return v.neg ? -static_cast<std::int64_t>(v.mag) : static_cast<std::int64_t>(v.mag);
}

} // namespace softreal
