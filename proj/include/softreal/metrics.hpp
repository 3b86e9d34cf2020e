// Error-statistics engines (exhaustive and Monte-Carlo), fault-injection
// studies, and the improvement-percentage calculator used for cost
// comparisons.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "softreal/netlist.hpp"
#include "softreal/parallel.hpp"
#include "softreal/rng.hpp"

namespace softreal {

struct ErrorReport {
    double mae = 0;        // mean |error|
    double mse = 0;        // mean error^2
    double aev = 0;        // variance of |error| (= mse - mae^2)
    std::uint64_t max_abs = 0;
    std::uint64_t count = 0;
    double normalizer = 1; // full-scale value for percentage views
    bool exhaustive = false;

    double mae_pct() const { return 100.0 * mae / normalizer; }
    double max_pct() const { return 100.0 * static_cast<double>(max_abs) / normalizer; }
    // AEV as percent of full scale reports the standard deviation equivalent
    // percentage of the variance, i.e. variance of (100*|e|/norm).
    double aev_pct() const { return 1e4 * aev / (normalizer * normalizer); }
};

namespace detail {

// Exact integer accumulation so that merging is order-insensitive.
struct ErrAccum {
    unsigned __int128 sum_abs = 0;
    unsigned __int128 sum_sq = 0;
    std::uint64_t max_abs = 0;
    std::uint64_t n = 0;

    void add(std::int64_t e) {
        const std::uint64_t ae = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
        sum_abs += ae;
        sum_sq += static_cast<unsigned __int128>(ae) * ae;
        if (ae > max_abs) max_abs = ae;
        ++n;
    }
    void merge(const ErrAccum& o) {
        sum_abs += o.sum_abs;
        sum_sq += o.sum_sq;
        if (o.max_abs > max_abs) max_abs = o.max_abs;
        n += o.n;
    }
    ErrorReport finish(double normalizer, bool exhaustive) const {
        ErrorReport r;
        r.count = n;
        r.normalizer = normalizer;
        r.exhaustive = exhaustive;
        if (n == 0) return r;
        const double dn = static_cast<double>(n);
        r.mae = static_cast<double>(sum_abs) / dn;
        r.mse = static_cast<double>(sum_sq) / dn;
        r.aev = r.mse - r.mae * r.mae;
        r.max_abs = max_abs;
        return r;
    }
};

} // namespace detail

using BinaryFn = std::function<std::uint64_t(std::uint64_t, std::uint64_t)>;

// Total operand bits allowed for exhaustive enumeration (~16.7M evaluations).
constexpr std::uint32_t kExhaustiveBitCap = 24;

// Enumerates all 2^(2*width) operand pairs; error = block - oracle as signed
// integers. Refuses widths over the cap by naming it.
inline ErrorReport exhaustive_error(const BinaryFn& block, const BinaryFn& oracle,
                                    std::uint32_t width) {
    if (2 * width > kExhaustiveBitCap)
        throw std::invalid_argument("exhaustive enumeration capped at 24 total operand bits (2*width <= 24)");
    if (width == 0) throw std::invalid_argument("operand width must be positive");
    detail::ErrAccum acc;
    const std::uint64_t range = std::uint64_t{1} << width;
    for (std::uint64_t a = 0; a < range; ++a)
        for (std::uint64_t b = 0; b < range; ++b)
            acc.add(static_cast<std::int64_t>(block(a, b)) - static_cast<std::int64_t>(oracle(a, b)));
    return acc.finish(std::ldexp(1.0, static_cast<int>(width)), true);
}

// Netlist-backed overload; packs 64 operand pairs per pass.
inline ErrorReport exhaustive_error(const Netlist& block, const BinaryFn& oracle,
                                    std::uint32_t width) {
    if (2 * width > kExhaustiveBitCap)
        throw std::invalid_argument("exhaustive enumeration capped at 24 total operand bits (2*width <= 24)");
    if (width == 0) throw std::invalid_argument("operand width must be positive");
    detail::ErrAccum acc;
    Evaluator ev(block);
    const std::uint64_t range = std::uint64_t{1} << width;
    std::vector<std::vector<std::uint64_t>> in(2), out;
    for (std::uint64_t base = 0; base < range * range; base += 64) {
        const std::size_t n = static_cast<std::size_t>(std::min<std::uint64_t>(64, range * range - base));
        in[0].resize(n);
        in[1].resize(n);
        for (std::size_t s = 0; s < n; ++s) {
            in[0][s] = (base + s) / range;
            in[1][s] = (base + s) % range;
        }
        ev.run_packed(in, out);
        for (std::size_t s = 0; s < n; ++s)
            acc.add(static_cast<std::int64_t>(out[0][s]) -
                    static_cast<std::int64_t>(oracle(in[0][s], in[1][s])));
    }
    return acc.finish(std::ldexp(1.0, static_cast<int>(width)), true);
}

struct InputDistribution {
    enum class Kind { UniformFullRange, FixedList, SeededRandom };
    Kind kind = Kind::UniformFullRange;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> fixed; // FixedList pairs
    std::uint64_t count = 0;                                    // SeededRandom sample count

    static InputDistribution uniform() { return {}; }
    static InputDistribution fixed_list(std::vector<std::pair<std::uint64_t, std::uint64_t>> v) {
        InputDistribution d;
        d.kind = Kind::FixedList;
        d.fixed = std::move(v);
        return d;
    }
    static InputDistribution seeded(std::uint64_t n) {
        InputDistribution d;
        d.kind = Kind::SeededRandom;
        d.count = n;
        return d;
    }

    std::pair<std::uint64_t, std::uint64_t> sample(std::uint32_t wa, std::uint32_t wb,
                                                   std::uint64_t seed, std::uint64_t t) const {
        if (kind == Kind::FixedList) {
            if (fixed.empty()) throw std::invalid_argument("FIXED_LIST distribution is empty");
            return fixed[static_cast<std::size_t>(t % fixed.size())];
        }
        const std::uint64_t ma = wa >= 64 ? ~0ULL : ((std::uint64_t{1} << wa) - 1);
        const std::uint64_t mb = wb >= 64 ? ~0ULL : ((std::uint64_t{1} << wb) - 1);
        return {hash_mix(seed, t, 0x1001) & ma, hash_mix(seed, t, 0x1002) & mb};
    }
};

// n sampled pairs through a counter-based stream; deterministic for fixed
// (dist, n, seed) and independent of the worker count.
inline ErrorReport monte_carlo_error(const BinaryFn& block, const BinaryFn& oracle,
                                     const InputDistribution& dist, std::uint32_t width,
                                     std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample count must be >= 1");
    detail::ErrAccum acc;
    for (std::uint64_t t = 0; t < n; ++t) {
        const auto [a, b] = dist.sample(width, width, seed, t);
        acc.add(static_cast<std::int64_t>(block(a, b)) - static_cast<std::int64_t>(oracle(a, b)));
    }
    return acc.finish(std::ldexp(1.0, static_cast<int>(width)), false);
}

// Netlist-backed overload, parallel over trial ranges.
inline ErrorReport monte_carlo_error(const Netlist& block, const BinaryFn& oracle,
                                     const InputDistribution& dist, std::uint32_t width,
                                     std::uint64_t n, std::uint64_t seed, int jobs = 1) {
    if (n == 0) throw std::invalid_argument("sample count must be >= 1");
    jobs = clamp_jobs(jobs);
    std::vector<detail::ErrAccum> parts(static_cast<std::size_t>(jobs) + 1);
    parallel_chunks(n, jobs, [&](int w, std::uint64_t begin, std::uint64_t end) {
        Evaluator ev(block);
        detail::ErrAccum& acc = parts[static_cast<std::size_t>(w)];
        for (std::uint64_t t = begin; t < end; ++t) {
            const auto [a, b] = dist.sample(width, width, seed, t);
            acc.add(static_cast<std::int64_t>(ev.run1(a, b)) -
                    static_cast<std::int64_t>(oracle(a, b)));
        }
    });
    detail::ErrAccum total;
    for (const auto& p : parts) total.merge(p);
    return total.finish(std::ldexp(1.0, static_cast<int>(width)), false);
}

// Fault-injection study over a two-operand block netlist: per trial, sample
// an input pair, run one fault-injected evaluation, and compare against the
// fault-free oracle.
inline ErrorReport fault_error(const Netlist& nl, const FaultConfig& cfg,
                               const InputDistribution& dist, const BinaryFn& oracle,
                               int jobs = 1) {
    cfg.check();
    if (nl.inputs.size() != 2)
        throw std::invalid_argument("fault_error expects a two-operand block netlist");
    const std::uint32_t wa = nl.inputs[0].width, wb = nl.inputs[1].width;
    jobs = clamp_jobs(jobs);
    std::vector<detail::ErrAccum> parts(static_cast<std::size_t>(jobs) + 1);
    parallel_chunks(cfg.trials, jobs, [&](int w, std::uint64_t begin, std::uint64_t end) {
        FaultEvaluator fe(nl, cfg);
        detail::ErrAccum& acc = parts[static_cast<std::size_t>(w)];
        for (std::uint64_t t = begin; t < end; ++t) {
            const auto [a, b] = dist.sample(wa, wb, cfg.base_seed, t);
            acc.add(static_cast<std::int64_t>(fe.run1(a, b, t)) -
                    static_cast<std::int64_t>(oracle(a, b)));
        }
    });
    detail::ErrAccum total;
    for (const auto& p : parts) total.merge(p);
    return total.finish(std::ldexp(1.0, static_cast<int>(std::max(wa, wb))), false);
}

// --- improvement percentages -------------------------------------------------

// improvement% = 100 * (reference - candidate) / candidate. This is the
// formula behind every percentage in the cost-comparison tables.
inline double improvement_pct(double reference, double candidate) {
    if (!(candidate > 0)) throw std::domain_error("improvement requires candidate > 0");
    return 100.0 * (reference - candidate) / candidate;
}

struct CostImprovement {
    double area = 0, delay = 0, adp = 0;
};

inline CostImprovement improvement(const CostReport& reference, const CostReport& candidate) {
    return {improvement_pct(reference.area, candidate.area),
            improvement_pct(reference.delay, candidate.delay),
            improvement_pct(reference.adp, candidate.adp)};
}

inline long long round_half_away(double x) {
    return static_cast<long long>(x >= 0 ? std::floor(x + 0.5) : std::ceil(x - 0.5));
}

// --- report serialization ------------------------------------------------------

namespace detail {

inline std::string fmt_double(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace detail

inline std::string report_csv_header() {
    return "block,params,mae,mse,aev,max_abs,count,normalizer,exhaustive,seed";
}

inline std::string report_csv_row(const std::string& block, const std::string& params,
                                  const ErrorReport& r, std::uint64_t seed) {
    std::string s = block + "," + params + ",";
    s += detail::fmt_double(r.mae) + ",";
    s += detail::fmt_double(r.mse) + ",";
    s += detail::fmt_double(r.aev) + ",";
    s += std::to_string(r.max_abs) + ",";
    s += std::to_string(r.count) + ",";
    s += detail::fmt_double(r.normalizer) + ",";
    s += r.exhaustive ? "1," : "0,";
    s += std::to_string(seed);
    return s;
}

} // namespace softreal
