// Generators for precise, imprecise (BIC) and relaxed-fault-tolerant (RFT)
// arithmetic blocks, paired with closed-form functional models that serve as
// their oracles:
//
//   build_rca / build_array_mult   precise ripple-carry adder, CSA array mult
//   build_loa / loa_value          lower-part OR adder
//   build_bam / bam_value          broken-array multiplier
//   build_rrca                     relaxed-TMR ripple-carry adder
//   build_ram                      relaxed-TMR array multiplier (per-cell TMR)
//   build_rft_adder                sectioned adder with per-section protection

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "softreal/netlist.hpp"

namespace softreal {

enum class Protection : std::uint8_t { Unprotected, Tmr };

struct Section {
    std::uint32_t width = 0;
    Protection prot = Protection::Unprotected;
};

enum class BlockFamily : std::uint8_t { Rca, ArrayMult, Loa, Bam, Rrca, Ram, RftAdder };

inline std::string_view block_family_name(BlockFamily f) {
    constexpr std::string_view names[] = {"rca", "array_mult", "loa", "bam", "rrca", "ram", "rft_adder"};
    return names[static_cast<int>(f)];
}

inline std::optional<BlockFamily> block_family_from_name(std::string_view s) {
    for (int i = 0; i < 7; ++i) {
        auto f = static_cast<BlockFamily>(i);
        if (block_family_name(f) == s) return f;
    }
    return std::nullopt;
}

// Tagged description of a block family plus its parameters. Adders use wl as
// the operand width p; multipliers cap at 16 bits so exhaustive oracles stay
// desk scale.
struct BlockSpec {
    BlockFamily family = BlockFamily::Rca;
    std::uint32_t wl = 8;
    std::uint32_t lpl = 0;      // Loa
    std::uint32_t hbl = 0, vbl = 0; // Bam
    std::uint32_t aul = 0;      // Rrca
    std::uint32_t hul = 0, vul = 0; // Ram
    bool loa_carry_and = true;  // carry-in AND gate; switchable for ablation
    std::vector<Section> sections; // RftAdder

    bool is_multiplier() const {
        return family == BlockFamily::ArrayMult || family == BlockFamily::Bam ||
               family == BlockFamily::Ram;
    }
    std::uint32_t operand_width() const { return wl; }
    std::uint32_t result_width() const { return is_multiplier() ? 2 * wl : wl + 1; }
};

namespace detail {

class NetBuilder {
public:
    NodeId add_input_bus(const std::string& name, std::uint32_t width) {
        nl_.inputs.push_back({name, width});
        const NodeId base = next_;
        next_ += width;
        return base;
    }

    // Call after all input buses are declared.
    NodeId gate(GateKind k, NodeId a = 0, NodeId b = 0, NodeTag tag = NodeTag::Plain) {
        nl_.gates.push_back({next_, k, a, b, tag});
        return next_++;
    }

    NodeId const0() {
        if (!const0_) const0_ = gate(GateKind::Const0);
        return *const0_;
    }

    // sum, carry of a full adder; 5 gates (2 XOR2, 2 AND2, 1 OR2)
    std::pair<NodeId, NodeId> full_adder(NodeId a, NodeId b, NodeId cin,
                                         NodeTag tag = NodeTag::Plain) {
        const NodeId x1 = gate(GateKind::Xor2, a, b, tag);
        const NodeId s = gate(GateKind::Xor2, x1, cin, tag);
        const NodeId g = gate(GateKind::And2, a, b, tag);
        const NodeId h = gate(GateKind::And2, x1, cin, tag);
        const NodeId c = gate(GateKind::Or2, g, h, tag);
        return {s, c};
    }

    // 2-of-3 majority: 3 AND2 + 2 OR2
    NodeId vote3(NodeId x, NodeId y, NodeId z, NodeTag tag = NodeTag::Voter) {
        const NodeId xy = gate(GateKind::And2, x, y, tag);
        const NodeId xz = gate(GateKind::And2, x, z, tag);
        const NodeId yz = gate(GateKind::And2, y, z, tag);
        const NodeId o1 = gate(GateKind::Or2, xy, xz, tag);
        return gate(GateKind::Or2, o1, yz, tag);
    }

    void add_output(const std::string& name, std::vector<NodeId> bits) {
        nl_.outputs.push_back({name, std::move(bits)});
    }

    Netlist finish() { return std::move(nl_); }

private:
    Netlist nl_;
    NodeId next_ = 0;
    std::optional<NodeId> const0_;
};

inline void check_range(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

// Unprotected ripple chain over bits [lo, hi); returns the carry out.
inline NodeId ripple_chain(NetBuilder& nb, NodeId a_base, NodeId b_base, std::uint32_t lo,
                           std::uint32_t hi, NodeId carry, std::vector<NodeId>& sum,
                           NodeTag tag = NodeTag::Plain) {
    for (std::uint32_t k = lo; k < hi; ++k) {
        auto [s, c] = nb.full_adder(a_base + k, b_base + k, carry, tag);
        sum[k] = s;
        carry = c;
    }
    return carry;
}

} // namespace detail

// --- precise adder ---------------------------------------------------------

// p-bit ripple-carry adder: buses a[p], b[p] -> sum[p+1] (carry included).
inline Netlist build_rca(std::uint32_t p) {
    detail::check_range(p >= 1 && p <= 32, "adder width must satisfy 1 <= p <= 32");
    detail::NetBuilder nb;
    const NodeId a = nb.add_input_bus("a", p);
    const NodeId b = nb.add_input_bus("b", p);
    std::vector<NodeId> sum(p + 1);
    const NodeId carry = detail::ripple_chain(nb, a, b, 0, p, nb.const0(), sum);
    sum[p] = carry;
    nb.add_output("sum", std::move(sum));
    return nb.finish();
}

// --- LOA -------------------------------------------------------------------

// Closed-form model of the lower-part OR adder. The lpl low result bits are
// the bitwise OR of the operands; the upper part is a precise addition with
// carry-in a[lpl-1] & b[lpl-1] (no upper part exists when lpl == p, so the
// carry-out is constant 0 there).
inline std::uint64_t loa_value(std::uint64_t a, std::uint64_t b, std::uint32_t p,
                               std::uint32_t lpl, bool carry_and = true) {
    detail::check_range(p >= 1 && p <= 32, "adder width must satisfy 1 <= p <= 32");
    detail::check_range(lpl <= p, "lpl must satisfy 0 <= lpl <= wl");
    detail::check_range((a >> p) == 0 && (b >> p) == 0, "operand exceeds 2^p - 1");
    const std::uint64_t mask = lpl == 0 ? 0 : ((std::uint64_t{1} << lpl) - 1);
    const std::uint64_t lo = (a | b) & mask;
    if (lpl == p) return lo;
    std::uint64_t cin = 0;
    if (lpl > 0 && carry_and) cin = (a >> (lpl - 1)) & (b >> (lpl - 1)) & 1u;
    const std::uint64_t hi = (a >> lpl) + (b >> lpl) + cin;
    return (hi << lpl) | lo;
}

inline Netlist build_loa(std::uint32_t p, std::uint32_t lpl, bool carry_and = true) {
    detail::check_range(p >= 1 && p <= 32, "adder width must satisfy 1 <= p <= 32");
    detail::check_range(lpl <= p, "lpl must satisfy 0 <= lpl <= wl");
    detail::NetBuilder nb;
    const NodeId a = nb.add_input_bus("a", p);
    const NodeId b = nb.add_input_bus("b", p);
    std::vector<NodeId> sum(p + 1);
    for (std::uint32_t k = 0; k < lpl; ++k)
        sum[k] = nb.gate(GateKind::Or2, a + k, b + k);
    if (lpl == p) {
        sum[p] = nb.const0();
    } else {
        NodeId carry;
        if (lpl == 0) carry = nb.const0();
        else if (carry_and) carry = nb.gate(GateKind::And2, a + lpl - 1, b + lpl - 1);
        else carry = nb.const0();
        carry = detail::ripple_chain(nb, a, b, lpl, p, carry, sum);
        sum[p] = carry;
    }
    nb.add_output("sum", std::move(sum));
    return nb.finish();
}

// --- array multiplier family ----------------------------------------------

namespace detail {

// Shared generator for the CSA array multiplier and its broken / relaxed-TMR
// variants. Cell (lane i, row j) holds partial product a_i*b_j at weight i+j.
//   include(i, j)        — cell exists at all (false cells contribute zero)
//   protect(i, j)        — cell gates are triplicated with voters on sum/carry
//   protect_merge(w)     — same for the vector-merge cell at product weight w
// The merge row is always present (it carries the surviving sums).
template <class IncludeFn, class ProtectFn, class MergeProtectFn>
Netlist build_mult_array(std::uint32_t wl, IncludeFn include, ProtectFn protect,
                         MergeProtectFn protect_merge) {
    check_range(wl >= 1 && wl <= 16, "multiplier width must satisfy 1 <= wl <= 16");
    NetBuilder nb;
    const NodeId a = nb.add_input_bus("a", wl);
    const NodeId b = nb.add_input_bus("b", wl);
    const NodeId zero = nb.const0();
    auto val = [&](std::optional<NodeId> n) { return n ? *n : zero; };

    // pp cell of row 0 (no CSA): just the AND, voted if protected
    auto make_pp = [&](std::uint32_t i, std::uint32_t j) -> std::optional<NodeId> {
        if (!include(i, j)) return std::nullopt;
        if (!protect(i, j))
            return nb.gate(GateKind::And2, a + i, b + j, NodeTag::Plain);
        NodeId r[3];
        for (int k = 0; k < 3; ++k)
            r[k] = nb.gate(GateKind::And2, a + i, b + j, NodeTag::Protected);
        return nb.vote3(r[0], r[1], r[2]);
    };

    std::vector<std::optional<NodeId>> sum_prev(wl), carry_prev(wl);
    std::vector<NodeId> prod(2 * wl, zero);

    for (std::uint32_t i = 0; i < wl; ++i) sum_prev[i] = make_pp(i, 0);
    prod[0] = val(sum_prev[0]);

    for (std::uint32_t j = 1; j < wl; ++j) {
        std::vector<std::optional<NodeId>> sum_cur(wl), carry_cur(wl);
        for (std::uint32_t i = 0; i < wl; ++i) {
            if (!include(i, j)) continue;
            const NodeId y = i + 1 < wl ? val(sum_prev[i + 1]) : zero;
            const NodeId z = val(carry_prev[i]);
            if (!protect(i, j)) {
                const NodeId pp = nb.gate(GateKind::And2, a + i, b + j, NodeTag::Plain);
                auto [s, c] = nb.full_adder(pp, y, z, NodeTag::Plain);
                sum_cur[i] = s;
                carry_cur[i] = c;
            } else {
                NodeId rs[3], rc[3];
                for (int k = 0; k < 3; ++k) {
                    const NodeId pp = nb.gate(GateKind::And2, a + i, b + j, NodeTag::Protected);
                    auto [s, c] = nb.full_adder(pp, y, z, NodeTag::Protected);
                    rs[k] = s;
                    rc[k] = c;
                }
                sum_cur[i] = nb.vote3(rs[0], rs[1], rs[2]);
                carry_cur[i] = nb.vote3(rc[0], rc[1], rc[2]);
            }
        }
        prod[j] = val(sum_cur[0]);
        sum_prev = std::move(sum_cur);
        carry_prev = std::move(carry_cur);
    }

    // merge sums (weights wl..2wl-2) with saved carries (weights wl..2wl-1)
    NodeId cin = zero;
    for (std::uint32_t w = wl; w < 2 * wl; ++w) {
        const std::uint32_t is = w - wl + 1;
        const NodeId x = is < wl ? val(sum_prev[is]) : zero;
        const NodeId y = val(carry_prev[w - wl]);
        if (!protect_merge(w)) {
            auto [s, c] = nb.full_adder(x, y, cin, NodeTag::Plain);
            prod[w] = s;
            cin = c; // top carry cannot fire: product < 2^(2wl)
        } else {
            NodeId rs[3], rc[3];
            for (int k = 0; k < 3; ++k) {
                auto [s, c] = nb.full_adder(x, y, cin, NodeTag::Protected);
                rs[k] = s;
                rc[k] = c;
            }
            prod[w] = nb.vote3(rs[0], rs[1], rs[2]);
            cin = nb.vote3(rc[0], rc[1], rc[2]);
        }
    }

    nb.add_output("prod", std::move(prod));
    return nb.finish();
}

} // namespace detail

// wl x wl CSA array multiplier: buses a[wl], b[wl] -> prod[2wl].
inline Netlist build_array_mult(std::uint32_t wl) {
    return detail::build_mult_array(
        wl, [](std::uint32_t, std::uint32_t) { return true; },
        [](std::uint32_t, std::uint32_t) { return false; },
        [](std::uint32_t) { return false; });
}

// Broken-array multiplier model: sum of the included partial products, where
// cell (i, j) survives iff j >= hbl and i + j >= vbl.
inline std::uint64_t bam_value(std::uint64_t a, std::uint64_t b, std::uint32_t wl,
                               std::uint32_t hbl, std::uint32_t vbl) {
    detail::check_range(wl >= 1 && wl <= 16, "multiplier width must satisfy 1 <= wl <= 16");
    detail::check_range(hbl <= wl, "hbl must satisfy 0 <= hbl <= wl");
    detail::check_range(vbl <= 2 * wl - 1, "vbl must satisfy 0 <= vbl <= 2wl-1");
    detail::check_range((a >> wl) == 0 && (b >> wl) == 0, "operand exceeds 2^wl - 1");
    std::uint64_t acc = 0;
    for (std::uint32_t j = hbl; j < wl; ++j)
        for (std::uint32_t i = 0; i < wl; ++i)
            if (i + j >= vbl)
                acc += (((a >> i) & 1u) & ((b >> j) & 1u)) << (i + j);
    return acc;
}

inline Netlist build_bam(std::uint32_t wl, std::uint32_t hbl, std::uint32_t vbl) {
    detail::check_range(hbl <= wl, "hbl must satisfy 0 <= hbl <= wl");
    detail::check_range(wl >= 1 && vbl <= 2 * wl - 1, "vbl must satisfy 0 <= vbl <= 2wl-1");
    return detail::build_mult_array(
        wl, [=](std::uint32_t i, std::uint32_t j) { return j >= hbl && i + j >= vbl; },
        [](std::uint32_t, std::uint32_t) { return false; },
        [](std::uint32_t) { return false; });
}

// Relaxed-TMR array multiplier: full product array; cell (i, j) is
// fault-probable (single copy) iff j < hul or i + j < vul, otherwise the cell
// is triplicated with voters on its sum and carry outputs. The vector-merge
// cell at product weight w sits below the last row, so it inherits row
// wl-1's horizontal level and its own weight's vertical level.
inline Netlist build_ram(std::uint32_t wl, std::uint32_t hul, std::uint32_t vul) {
    detail::check_range(hul <= wl, "hul must satisfy 0 <= hul <= wl");
    detail::check_range(wl >= 1 && vul <= 2 * wl - 1, "vul must satisfy 0 <= vul <= 2wl-1");
    return detail::build_mult_array(
        wl, [](std::uint32_t, std::uint32_t) { return true; },
        [=](std::uint32_t i, std::uint32_t j) { return !(j < hul || i + j < vul); },
        [=](std::uint32_t w) { return !(wl - 1 < hul || w < vul); });
}

// --- sectioned RFT adders ---------------------------------------------------

// Generalized RFT adder: consecutive sub-adders (least significant first)
// with per-section protection. The carry crosses each section boundary as a
// single wire, fanned out to the replicas of a TMR section.
inline Netlist build_rft_adder(const std::vector<Section>& sections) {
    detail::check_range(!sections.empty(), "rft adder needs at least one section");
    std::uint32_t p = 0;
    for (const auto& s : sections) {
        detail::check_range(s.width >= 1, "rft section width must be positive");
        p += s.width;
    }
    detail::check_range(p <= 32, "rft adder width must satisfy p <= 32");

    detail::NetBuilder nb;
    const NodeId a = nb.add_input_bus("a", p);
    const NodeId b = nb.add_input_bus("b", p);
    std::vector<NodeId> sum(p + 1);
    NodeId carry = nb.const0();
    std::uint32_t bit = 0;
    for (const auto& sec : sections) {
        const std::uint32_t lo = bit, hi = bit + sec.width;
        if (sec.prot == Protection::Unprotected) {
            carry = detail::ripple_chain(nb, a, b, lo, hi, carry, sum, NodeTag::Plain);
        } else {
            NodeId rep_carry[3];
            std::vector<std::array<NodeId, 3>> rep_sum(sec.width);
            for (int r = 0; r < 3; ++r) {
                NodeId c = carry; // shared boundary carry fans out to all replicas
                for (std::uint32_t k = lo; k < hi; ++k) {
                    auto [s, cc] = nb.full_adder(a + k, b + k, c, NodeTag::Protected);
                    rep_sum[k - lo][r] = s;
                    c = cc;
                }
                rep_carry[r] = c;
            }
            for (std::uint32_t k = lo; k < hi; ++k)
                sum[k] = nb.vote3(rep_sum[k - lo][0], rep_sum[k - lo][1], rep_sum[k - lo][2]);
            carry = nb.vote3(rep_carry[0], rep_carry[1], rep_carry[2]);
        }
        bit = hi;
    }
    sum[p] = carry;
    nb.add_output("sum", std::move(sum));
    return nb.finish();
}

// Relaxed-TMR ripple-carry adder: bits [0, aul) unprotected, bits [aul, p)
// and the final carry TMR-protected; equals build_rft_adder on the matching
// two-section split, gate for gate.
inline Netlist build_rrca(std::uint32_t p, std::uint32_t aul) {
    detail::check_range(p >= 1 && p <= 32, "adder width must satisfy 1 <= p <= 32");
    detail::check_range(aul <= p, "aul must satisfy 0 <= aul <= wl");
    std::vector<Section> sections;
    if (aul > 0) sections.push_back({aul, Protection::Unprotected});
    if (aul < p) sections.push_back({p - aul, Protection::Tmr});
    return build_rft_adder(sections);
}

// --- spec-driven dispatch ----------------------------------------------------

inline void validate_spec(const BlockSpec& s) {
    switch (s.family) {
        case BlockFamily::Rca:
            detail::check_range(s.wl >= 1 && s.wl <= 32, "adder width must satisfy 1 <= p <= 32");
            break;
        case BlockFamily::Loa:
            detail::check_range(s.wl >= 1 && s.wl <= 32, "adder width must satisfy 1 <= p <= 32");
            detail::check_range(s.lpl <= s.wl, "lpl must satisfy 0 <= lpl <= wl");
            break;
        case BlockFamily::Rrca:
            detail::check_range(s.wl >= 1 && s.wl <= 32, "adder width must satisfy 1 <= p <= 32");
            detail::check_range(s.aul <= s.wl, "aul must satisfy 0 <= aul <= wl");
            break;
        case BlockFamily::ArrayMult:
            detail::check_range(s.wl >= 1 && s.wl <= 16, "multiplier width must satisfy 1 <= wl <= 16");
            break;
        case BlockFamily::Bam:
            detail::check_range(s.wl >= 1 && s.wl <= 16, "multiplier width must satisfy 1 <= wl <= 16");
            detail::check_range(s.hbl <= s.wl, "hbl must satisfy 0 <= hbl <= wl");
            detail::check_range(s.vbl <= 2 * s.wl - 1, "vbl must satisfy 0 <= vbl <= 2wl-1");
            break;
        case BlockFamily::Ram:
            detail::check_range(s.wl >= 1 && s.wl <= 16, "multiplier width must satisfy 1 <= wl <= 16");
            detail::check_range(s.hul <= s.wl, "hul must satisfy 0 <= hul <= wl");
            detail::check_range(s.vul <= 2 * s.wl - 1, "vul must satisfy 0 <= vul <= 2wl-1");
            break;
        case BlockFamily::RftAdder: {
            detail::check_range(!s.sections.empty(), "rft adder needs at least one section");
            std::uint32_t total = 0;
            for (const auto& sec : s.sections) {
                detail::check_range(sec.width >= 1, "rft section width must be positive");
                total += sec.width;
            }
            detail::check_range(total == s.wl, "rft section widths must sum to the operand width");
            detail::check_range(s.wl >= 1 && s.wl <= 32, "adder width must satisfy 1 <= p <= 32");
            break;
        }
    }
}

inline Netlist build_block(const BlockSpec& s) {
    validate_spec(s);
    switch (s.family) {
        case BlockFamily::Rca: return build_rca(s.wl);
        case BlockFamily::ArrayMult: return build_array_mult(s.wl);
        case BlockFamily::Loa: return build_loa(s.wl, s.lpl, s.loa_carry_and);
        case BlockFamily::Bam: return build_bam(s.wl, s.hbl, s.vbl);
        case BlockFamily::Rrca: return build_rrca(s.wl, s.aul);
        case BlockFamily::Ram: return build_ram(s.wl, s.hul, s.vul);
        default: return build_rft_adder(s.sections);
    }
}

// Closed-form functional model of the block's fault-free behavior.
inline std::uint64_t model_value(const BlockSpec& s, std::uint64_t a, std::uint64_t b) {
    switch (s.family) {
        case BlockFamily::Loa: return loa_value(a, b, s.wl, s.lpl, s.loa_carry_and);
        case BlockFamily::Bam: return bam_value(a, b, s.wl, s.hbl, s.vbl);
        case BlockFamily::ArrayMult:
        case BlockFamily::Ram: return a * b;
        default: return a + b; // Rca, Rrca, RftAdder
    }
}

// Exact reference the block approximates (integer add or multiply).
inline std::uint64_t exact_value(const BlockSpec& s, std::uint64_t a, std::uint64_t b) {
    return s.is_multiplier() ? a * b : a + b;
}

} // namespace softreal
