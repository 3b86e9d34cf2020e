// Weighted-Plateau-Average defuzzifier over the pluggable arithmetic blocks.
//
// crisp = round( sum_i w_i * c_i / sum_i w_i )
//   c_i = floor((left_i + right_i) / 2)       plateau midpoint
//   w_i = height_i * (right_i - left_i + 1)   plateau mass
//
// Plateau geometry (lengths, midpoints) is index arithmetic and stays exact;
// the weight products, the numerator MAC and both accumulations run through
// the configured blocks; the final division is exact integer rounding.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "softreal/arith.hpp"
#include "softreal/blocks.hpp"
#include "softreal/metrics.hpp"
#include "softreal/parallel.hpp"
#include "softreal/rng.hpp"

namespace softreal {

struct Plateau {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t height = 0;
};

using PlateauSet = std::vector<Plateau>;

inline void validate_plateaus(const PlateauSet& ps, std::uint32_t wl) {
    if (ps.empty()) throw std::invalid_argument("plateau set must be non-empty");
    const std::uint64_t fw = std::uint64_t{1} << wl;
    bool mass = false;
    for (const auto& p : ps) {
        if (p.left > p.right || p.right >= fw)
            throw std::invalid_argument("plateau edges must satisfy left <= right < FuzzyWidth");
        if (p.height >= fw)
            throw std::invalid_argument("plateau height must be below FuzzyWidth");
        if (p.height > 0) mass = true;
    }
    if (!mass) throw std::invalid_argument("plateau set needs a plateau with height > 0");
}

// One defuzzifier datapath instance: the numerator multiplier (mass times
// midpoint) plus numerator/denominator accumulators. Plateau masses and
// midpoints are geometry decoding and stay exact. wl is the fuzzy word
// length; the universe is [0, 2^wl).
class WpaEngine {
public:
    WpaEngine(std::uint32_t wl, const ArithConfig& cfg, std::uint32_t max_plateaus = 8)
        : wl_(wl), max_plateaus_(max_plateaus) {
        if (wl < 1 || wl > 7)
            throw std::invalid_argument("wpa word length must satisfy 1 <= wl <= 7");
        if (max_plateaus < 1) throw std::invalid_argument("max_plateaus must be positive");
        if (!cfg.multiplier.is_multiplier())
            throw std::invalid_argument("multiplier spec must be a multiplier family");
        if (cfg.adder.is_multiplier())
            throw std::invalid_argument("adder spec must be an adder family");

        const std::uint32_t lg = ceil_log2(max_plateaus);
        const std::uint32_t w_mass = 2 * wl + 1;        // height * length, exact
        den_width_ = w_mass + lg;
        num_width_ = w_mass + wl + lg;

        BlockSpec m = cfg.multiplier;
        m.wl = w_mass; // mass (2wl+1 bits) x midpoint (wl bits)
        validate_spec(m);

        mult_num_ = FaultableBlock(build_block(m), cfg.fault, cfg.fault_plain_only);
        // frac = 0 on this datapath, so block parameters apply unscaled
        add_num_ = FaultableBlock(MacUnit::build_accumulator_adder(cfg.adder, num_width_, 0),
                                  cfg.fault, cfg.fault_plain_only);
        add_den_ = FaultableBlock(MacUnit::build_accumulator_adder(cfg.adder, den_width_, 0),
                                  cfg.fault, cfg.fault_plain_only);
        num_mask_ = (std::uint64_t{1} << num_width_) - 1;
        den_mask_ = (std::uint64_t{1} << den_width_) - 1;
        faulty_ = cfg.faulty();
        fault_seed_ = cfg.fault ? cfg.fault->base_seed : 0;
    }

    std::uint32_t fuzzy_width() const { return 1u << wl_; }

    // Total weighted gate count of the three block instances.
    double area(const CostWeights& w = CostWeights::unit()) const {
        return cost(mult_num_.netlist(), w).area +
               cost(add_num_.netlist(), w).area + cost(add_den_.netlist(), w).area;
    }

    std::uint64_t defuzzify(const PlateauSet& ps, std::uint64_t trial = 0) {
        validate_plateaus(ps, wl_);
        if (ps.size() > max_plateaus_)
            throw std::invalid_argument("plateau count exceeds the engine's max_plateaus");
        if (faulty_) {
            const std::uint64_t k = hash_mix(fault_seed_, trial, 0xDEF);
            mult_num_.reseed(hash_mix(k, 1));
            add_num_.reseed(hash_mix(k, 2));
            add_den_.reseed(hash_mix(k, 3));
        }
        std::uint64_t seq = 0;
        std::uint64_t num = 0, den = 0;
        for (const auto& p : ps) {
            const std::uint64_t len = p.right - p.left + 1;
            const std::uint64_t mid = (p.left + p.right) / 2;
            const std::uint64_t mass = p.height * len; // plateau geometry, exact
            // masks keep fault-corrupted intermediates inside the downstream
            // widths; saturating accumulation, never silent wraparound
            const std::uint64_t term = mult_num_.eval(mass, mid, seq++) & num_mask_;
            const std::uint64_t nsum = add_num_.eval(num, term, seq++);
            num = nsum > num_mask_ ? num_mask_ : nsum;
            const std::uint64_t dsum = add_den_.eval(den, mass, seq++);
            den = dsum > den_mask_ ? den_mask_ : dsum;
        }
        if (den == 0) return 0; // only reachable through injected faults
        return (2 * num + den) / (2 * den); // round half up, exact division
    }

private:
    std::uint32_t wl_;
    std::uint32_t max_plateaus_;
    std::uint32_t num_width_ = 0, den_width_ = 0;
    std::uint64_t num_mask_ = 0, den_mask_ = 0;
    FaultableBlock mult_num_, add_num_, add_den_;
    bool faulty_ = false;
    std::uint64_t fault_seed_ = 0;
};

inline std::uint64_t wpa_defuzzify(const PlateauSet& ps, const ArithConfig& cfg,
                                   std::uint32_t wl) {
    WpaEngine eng(wl, cfg);
    return eng.defuzzify(ps);
}

// Seeded random plateau set: 1..4 plateaus, first one guaranteed mass.
inline PlateauSet random_plateau_set(std::uint32_t wl, std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t fw = std::uint64_t{1} << wl;
    CounterStream s(seed, hash_mix(0x9A7EAU, index));
    PlateauSet ps;
    const std::uint64_t k = 1 + s.below(0, 4);
    for (std::uint64_t j = 0; j < k; ++j) {
        Plateau p;
        p.left = static_cast<std::uint32_t>(s.below(4 * j + 1, fw));
        p.right = p.left + static_cast<std::uint32_t>(s.below(4 * j + 2, fw - p.left));
        p.height = static_cast<std::uint32_t>(j == 0 ? 1 + s.below(4 * j + 3, fw - 1)
                                                     : s.below(4 * j + 3, fw));
        ps.push_back(p);
    }
    return ps;
}

// Compares the configured datapath against the precise datapath of the same
// word length over seeded random plateau sets; the report normalizer is
// FuzzyWidth, so the percentage views are fractions of the universe.
inline ErrorReport defuzz_error_study(const ArithConfig& cfg, std::uint32_t wl,
                                      std::uint64_t samples, std::uint64_t seed,
                                      int jobs = 1) {
    if (samples == 0) throw std::invalid_argument("sample count must be >= 1");
    jobs = clamp_jobs(jobs);
    std::vector<detail::ErrAccum> parts(static_cast<std::size_t>(jobs) + 1);
    parallel_chunks(samples, jobs, [&](int w, std::uint64_t begin, std::uint64_t end) {
        WpaEngine eng(wl, cfg);
        WpaEngine ref(wl, ArithConfig::precise());
        auto& acc = parts[static_cast<std::size_t>(w)];
        for (std::uint64_t t = begin; t < end; ++t) {
            const PlateauSet ps = random_plateau_set(wl, seed, t);
            const auto got = static_cast<std::int64_t>(eng.defuzzify(ps, t));
            const auto want = static_cast<std::int64_t>(ref.defuzzify(ps));
            acc.add(got - want);
        }
    });
    detail::ErrAccum total;
    for (const auto& p : parts) total.merge(p);
    return total.finish(std::ldexp(1.0, static_cast<int>(wl)), false);
}

} // namespace softreal
