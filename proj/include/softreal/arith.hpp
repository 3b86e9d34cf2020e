// Pluggable MAC datapath built from gate-level blocks.
//
// Accumulator scale rule: the MAC accumulates raw products, which carry twice
// the format's fraction bits. Block parameters that count low-significance
// result bits (LOA's lpl, RRCA's aul, the first unprotected RFT section) are
// given at the format's bit scale; a non-empty lower section subsumes the
// extra fraction bits beneath it, so its accumulator width is param + frac.
// param = 0 means the section does not exist at all (a zero-lpl LOA is a
// plain adder, a zero-aul RRCA is fully protected), keeping the degenerate
// configs bit-identical to the precise one. Top headroom bits extend the most
// significant (protected/precise) section. At frac = 0 the rule is the
// identity, so integer datapaths (e.g. the WPA unit) are untouched.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "softreal/blocks.hpp"
#include "softreal/fixed_point.hpp"
#include "softreal/netlist.hpp"
#include "softreal/rng.hpp"

namespace softreal {

struct ArithConfig {
    BlockSpec adder;       // Rca | Loa | Rrca | RftAdder; instantiated at the accumulator width
    BlockSpec multiplier;  // ArrayMult | Bam | Ram; instantiated at the operand width
    std::optional<FaultConfig> fault;
    std::uint32_t acc_width = 0; // 0 = derive from format and term count
    // Restrict flips to fault-probable (plain) nodes of each block. Protected
    // replicas then never flip, which removes the double-replica p^2 channel;
    // that channel is negligible at realistic per-node fault rates but
    // dominates small desk-scale accumulators when p_err is pushed high.
    bool fault_plain_only = false;

    static ArithConfig precise() {
        ArithConfig c;
        c.adder.family = BlockFamily::Rca;
        c.multiplier.family = BlockFamily::ArrayMult;
        return c;
    }
    bool faulty() const { return fault && fault->p_err > 0; }
};

inline std::uint32_t ceil_log2(std::uint64_t n) {
    std::uint32_t b = 0;
    while ((std::uint64_t{1} << b) < n) ++b;
    return b;
}

// A block netlist with an optional fault-injection path. Each evaluation
// consumes one stream index, so repeated evaluations inside one trial see
// independent fault draws.
class FaultableBlock {
public:
    FaultableBlock() = default;
    FaultableBlock(Netlist nl, const std::optional<FaultConfig>& fault, bool plain_only = false)
        : nl_(std::make_unique<Netlist>(std::move(nl))) {
        ev_.emplace(*nl_);
        if (fault && fault->p_err > 0) {
            FaultConfig cfg = *fault;
            if (plain_only && !cfg.fault_region)
                cfg.fault_region = nodes_with_tag(*nl_, NodeTag::Plain);
            fev_.emplace(*nl_, cfg);
        }
    }

    const Netlist& netlist() const { return *nl_; }
    Evaluator& plain() { return *ev_; }
    bool faulty() const { return fev_.has_value(); }

    // stream key for subsequent faulted evaluations
    void reseed(std::uint64_t seed) {
        if (fev_) fev_->reseed(seed);
    }

    std::uint64_t eval(std::uint64_t a, std::uint64_t b, std::uint64_t seq) {
        if (fev_) return fev_->run1(a, b, seq);
        return ev_->run1(a, b);
    }

private:
    std::unique_ptr<Netlist> nl_;
    std::optional<Evaluator> ev_;
    std::optional<FaultEvaluator> fev_;
};

struct MacResult {
    std::int64_t value = 0;
    bool saturated = false;
};

// Compiled multiply-accumulate unit for one fixed-point format. Products are
// formed on magnitudes through the configured multiplier; positive and
// negative products accumulate into two separate magnitude accumulators
// through the configured adder; the result is their exact difference.
class MacUnit {
public:
    MacUnit(const FixedPointFormat& fmt, const ArithConfig& cfg, std::uint32_t max_terms)
        : fmt_(fmt), max_terms_(max_terms) {
        fmt.check();
        if (max_terms == 0) throw std::invalid_argument("max_terms must be positive");
        if (!cfg.multiplier.is_multiplier())
            throw std::invalid_argument("multiplier spec must be a multiplier family");
        if (cfg.adder.is_multiplier())
            throw std::invalid_argument("adder spec must be an adder family");

        const std::uint32_t needed = 2 * fmt.wl + ceil_log2(max_terms);
        acc_width_ = cfg.acc_width ? cfg.acc_width : needed;
        if (acc_width_ < needed)
            throw std::invalid_argument("accumulator width below 2*wl + ceil(log2(max terms))");
        if (acc_width_ > 32) acc_width_ = 32; // adder generator cap
        scale_shift_ = fmt.frac;

        BlockSpec m = cfg.multiplier;
        m.wl = fmt.wl;
        validate_spec(m);
        mult_ = FaultableBlock(build_block(m), cfg.fault, cfg.fault_plain_only);
        add_ = FaultableBlock(build_accumulator_adder(cfg.adder, acc_width_, scale_shift_),
                              cfg.fault, cfg.fault_plain_only);
        faulty_ = cfg.faulty();
        fault_seed_ = cfg.fault ? cfg.fault->base_seed : 0;
    }

    std::uint32_t acc_width() const { return acc_width_; }
    std::uint32_t scale_shift() const { return scale_shift_; }
    const Netlist& multiplier_netlist() const { return mult_.netlist(); }
    const Netlist& adder_netlist() const { return add_.netlist(); }

    // Adder instantiation at the accumulator width under the scale rule above.
    static Netlist build_accumulator_adder(const BlockSpec& spec, std::uint32_t width,
                                           std::uint32_t shift) {
        const auto widen = [&](std::uint32_t param) {
            return param == 0 ? 0u : std::min(width, param + shift);
        };
        switch (spec.family) {
            case BlockFamily::Rca: return build_rca(width);
            case BlockFamily::Loa:
                return build_loa(width, widen(spec.lpl), spec.loa_carry_and);
            case BlockFamily::Rrca:
                return build_rrca(width, widen(spec.aul));
            case BlockFamily::RftAdder: {
                std::vector<Section> secs = spec.sections;
                if (secs.empty()) throw std::invalid_argument("rft adder needs at least one section");
                std::uint32_t total = 0;
                for (const auto& s : secs) total += s.width;
                if (secs.front().prot == Protection::Unprotected) secs.front().width += shift;
                else secs.back().width += shift; // widen at the top instead
                total += shift;
                if (total > width) throw std::invalid_argument("rft sections exceed accumulator width");
                secs.back().width += width - total; // headroom joins the top section
                return build_rft_adder(secs);
            }
            default:
                throw std::invalid_argument("adder spec must be an adder family");
        }
    }

    // Establishes the fault streams for one application-level trial; each
    // block evaluation inside the trial then consumes one sequence index.
    void begin_trial(std::uint64_t trial) {
        if (!faulty_) return;
        const std::uint64_t k = hash_mix(fault_seed_, trial, 0xACC);
        mult_.reseed(k);
        add_.reseed(hash_mix(k, 1));
        seq_ = 0;
    }

    MacResult mac(std::span<const FixedValue> values, std::span<const FixedValue> weights) {
        if (values.size() != weights.size() || values.empty())
            throw std::invalid_argument("mac needs equal, non-empty value/weight lists");
        if (values.size() > max_terms_)
            throw std::invalid_argument("mac term count exceeds the unit's max_terms");
        const std::uint64_t acc_mask = (std::uint64_t{1} << acc_width_) - 1;
        std::uint64_t pos = 0, neg = 0;
        bool sat = false;
        for (std::size_t k = 0; k < values.size(); ++k) {
            check_mag(values[k]);
            check_mag(weights[k]);
            const std::uint64_t p = mult_.eval(values[k].mag, weights[k].mag, seq_++);
            std::uint64_t& acc = (values[k].neg ^ weights[k].neg) ? neg : pos;
            const std::uint64_t sum = add_.eval(acc, p & acc_mask, seq_++);
            if (sum >> acc_width_) {
                sat = true;
                acc = acc_mask;
            } else {
                acc = sum;
            }
        }
        return {static_cast<std::int64_t>(pos) - static_cast<std::int64_t>(neg), sat};
    }

    // Fault-free batch MAC: up to 64 sample rows share one weight vector.
    // Requires non-negative values (the MLP activations), so each product's
    // sign is the weight's sign uniformly across the batch.
    void mac_batch(const std::vector<std::vector<FixedValue>>& rows,
                   std::span<const FixedValue> weights, std::vector<MacResult>& out) {
        if (faulty_)
            throw std::logic_error("mac_batch is a fault-free fast path");
        const std::size_t n = rows.size();
        if (n > 64) throw std::invalid_argument("mac_batch is limited to 64 rows");
        out.assign(n, {});
        if (n == 0) return;
        const std::uint64_t acc_mask = (std::uint64_t{1} << acc_width_) - 1;
        std::vector<std::uint64_t> pos(n, 0), neg(n, 0);
        std::vector<std::uint8_t> sat(n, 0);
        std::vector<std::vector<std::uint64_t>> min(2), aout, ain(2);
        min[0].resize(n);
        min[1].resize(n);
        ain[0].resize(n);
        ain[1].resize(n);
        const std::size_t terms = weights.size();
        for (std::size_t s = 0; s < n; ++s)
            if (rows[s].size() != terms)
                throw std::invalid_argument("mac_batch rows must match the weight count");
        for (std::size_t k = 0; k < terms; ++k) {
            for (std::size_t s = 0; s < n; ++s) {
                const auto& v = rows[s][k];
                if (v.neg) throw std::invalid_argument("mac_batch requires non-negative values");
                min[0][s] = v.mag;
                min[1][s] = weights[k].mag;
            }
            mult_.plain().run_packed(min, aout);
            auto& acc = weights[k].neg ? neg : pos;
            for (std::size_t s = 0; s < n; ++s) {
                ain[0][s] = acc[s];
                ain[1][s] = aout[0][s] & acc_mask;
            }
            std::vector<std::vector<std::uint64_t>> sum_out;
            add_.plain().run_packed(ain, sum_out);
            for (std::size_t s = 0; s < n; ++s) {
                const std::uint64_t sum = sum_out[0][s];
                if (sum >> acc_width_) {
                    sat[s] = 1;
                    acc[s] = acc_mask;
                } else {
                    acc[s] = sum;
                }
            }
        }
        for (std::size_t s = 0; s < n; ++s)
            out[s] = {static_cast<std::int64_t>(pos[s]) - static_cast<std::int64_t>(neg[s]),
                      sat[s] != 0};
    }

private:
    void check_mag(const FixedValue& v) const {
        if (v.mag > fmt_.max_mag())
            throw std::invalid_argument("fixed-point magnitude exceeds the format");
    }

    FixedPointFormat fmt_;
    std::uint32_t max_terms_;
    std::uint32_t acc_width_ = 0;
    std::uint32_t scale_shift_ = 0;
    FaultableBlock mult_, add_;
    bool faulty_ = false;
    std::uint64_t fault_seed_ = 0;
    std::uint64_t seq_ = 0;
};

} // namespace softreal
