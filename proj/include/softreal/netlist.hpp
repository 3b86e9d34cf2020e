// Gate-level netlist IR: immutable DAG of boolean gates with named buses,
// deterministic evaluation, per-node transient fault injection, weighted
// cost metrics, and whole-module TMR transformation.

#pragma once

#include <array>
#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "softreal/rng.hpp"

namespace softreal {

using NodeId = std::uint32_t;
using Word = std::uint64_t; // 64 evaluation lanes per node

enum class GateKind : std::uint8_t { And2, Or2, Xor2, Not, Buf, Const0, Const1 };

// Fault-site classification. Plain nodes are ordinary logic, Protected nodes
// are replica gates inside a TMR region, Voter nodes are majority-voter gates
// (exempt from flips when FaultConfig::voters_fault_free is set).
enum class NodeTag : std::uint8_t { Plain, Protected, Voter };

constexpr int gate_fanin(GateKind k) {
    switch (k) {
        case GateKind::And2:
        case GateKind::Or2:
        case GateKind::Xor2: return 2;
        case GateKind::Not:
        case GateKind::Buf: return 1;
        default: return 0;
    }
}

constexpr std::string_view gate_kind_name(GateKind k) {
    constexpr std::string_view names[] = {"AND2", "OR2", "XOR2", "NOT", "BUF", "CONST0", "CONST1"};
    return names[static_cast<int>(k)];
}

inline std::optional<GateKind> gate_kind_from_name(std::string_view s) {
    for (int i = 0; i < 7; ++i) {
        auto k = static_cast<GateKind>(i);
        if (gate_kind_name(k) == s) return k;
    }
    return std::nullopt;
}

struct InputBus {
    std::string name;
    std::uint32_t width = 0;
    bool operator==(const InputBus&) const = default;
};

struct Gate {
    NodeId id = 0;
    GateKind kind = GateKind::Const0;
    NodeId in0 = 0;
    NodeId in1 = 0;
    NodeTag tag = NodeTag::Plain;
    bool operator==(const Gate&) const = default;
};

struct OutputBus {
    std::string name;
    std::vector<NodeId> bits; // LSB first
    bool operator==(const OutputBus&) const = default;
};

// Immutable after construction. Input bits occupy node ids [0, input_bit_count)
// in bus declaration order; gate ids are dense above that (any order that
// respects the topological constraint, though builders always emit
// id == input_bit_count + position).
struct Netlist {
    std::vector<InputBus> inputs;
    std::vector<Gate> gates;
    std::vector<OutputBus> outputs;

    bool operator==(const Netlist&) const = default;

    std::uint32_t input_bit_count() const {
        std::uint32_t n = 0;
        for (const auto& b : inputs) n += b.width;
        return n;
    }
    std::size_t node_count() const { return input_bit_count() + gates.size(); }

    // First node id of the named input bus.
    std::uint32_t input_bit_base(std::size_t bus_index) const {
        std::uint32_t n = 0;
        for (std::size_t i = 0; i < bus_index; ++i) n += inputs[i].width;
        return n;
    }

    std::optional<std::size_t> find_output(std::string_view name) const {
        for (std::size_t i = 0; i < outputs.size(); ++i)
            if (outputs[i].name == name) return i;
        return std::nullopt;
    }
    std::optional<std::size_t> find_input(std::string_view name) const {
        for (std::size_t i = 0; i < inputs.size(); ++i)
            if (inputs[i].name == name) return i;
        return std::nullopt;
    }
};

struct Violation {
    NodeId node = 0;
    std::string rule;
};

// Checks all structural invariants. Returns an empty list iff the netlist is
// well formed; each violation names the offending node and the broken rule.
inline std::vector<Violation> validate(const Netlist& nl) {
    std::vector<Violation> out;
    const std::uint32_t n_in = nl.input_bit_count();
    const std::size_t n_nodes = n_in + nl.gates.size();

    for (const auto& b : nl.inputs)
        if (b.width == 0 || b.width > 64)
            out.push_back({0, "input bus width must be in [1,64]: " + b.name});

    // id bookkeeping: 0 = unseen, 1 = input, 2 = gate already defined
    std::vector<std::uint8_t> seen(n_nodes, 0);
    for (std::uint32_t i = 0; i < n_in; ++i) seen[i] = 1;

    for (const auto& g : nl.gates) {
        if (g.id >= n_nodes) {
            out.push_back({g.id, "node id not dense"});
            continue;
        }
        if (seen[g.id]) {
            out.push_back({g.id, seen[g.id] == 1 ? "gate id collides with input node"
                                                 : "duplicate node id"});
            continue;
        }
        const int fanin = gate_fanin(g.kind);
        const NodeId ins[2] = {g.in0, g.in1};
        for (int i = 0; i < fanin; ++i) {
            if (ins[i] >= n_nodes || (ins[i] >= n_in && !seen[ins[i]]))
                out.push_back({g.id, "topological order"});
        }
        seen[g.id] = 2;
    }
    for (const auto& ob : nl.outputs)
        for (NodeId bit : ob.bits)
            if (bit >= n_nodes || !seen[bit])
                out.push_back({bit, "dangling output: " + ob.name});
    return out;
}

inline void require_valid(const Netlist& nl) {
    auto v = validate(nl);
    if (!v.empty())
        throw std::invalid_argument("invalid netlist: " + v.front().rule);
}

namespace detail {

// One topological pass over the gates; node values live in `nodes` indexed by
// id, with input bits pre-filled by the caller. All 64 lanes evaluate
// independently (packed simulation); scalar callers use lane 0.
inline void eval_gates(const Netlist& nl, std::span<Word> nodes) {
    for (const auto& g : nl.gates) {
        Word v;
        switch (g.kind) {
            case GateKind::And2: v = nodes[g.in0] & nodes[g.in1]; break;
            case GateKind::Or2:  v = nodes[g.in0] | nodes[g.in1]; break;
            case GateKind::Xor2: v = nodes[g.in0] ^ nodes[g.in1]; break;
            case GateKind::Not:  v = ~nodes[g.in0]; break;
            case GateKind::Buf:  v = nodes[g.in0]; break;
            case GateKind::Const0: v = 0; break;
            default:             v = ~Word{0}; break; // Const1
        }
        nodes[g.id] = v;
    }
}

inline void load_scalar_inputs(const Netlist& nl, std::span<const std::uint64_t> bus_values,
                               std::span<Word> nodes) {
    if (bus_values.size() != nl.inputs.size())
        throw std::invalid_argument("input bus count mismatch");
    std::uint32_t base = 0;
    for (std::size_t b = 0; b < nl.inputs.size(); ++b) {
        const std::uint32_t w = nl.inputs[b].width;
        if (w < 64 && (bus_values[b] >> w) != 0)
            throw std::invalid_argument("input value exceeds bus width: " + nl.inputs[b].name);
        for (std::uint32_t i = 0; i < w; ++i)
            nodes[base + i] = (bus_values[b] >> i) & 1u;
        base += w;
    }
}

inline std::uint64_t read_scalar_output(const OutputBus& ob, std::span<const Word> nodes) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < ob.bits.size(); ++i)
        v |= (nodes[ob.bits[i]] & 1u) << i;
    return v;
}

} // namespace detail

// Reusable evaluation workspace. Netlists are shared and immutable; each
// Evaluator owns its node buffer, so use one instance per thread.
class Evaluator {
public:
    explicit Evaluator(const Netlist& nl) : nl_(&nl), nodes_(nl.node_count(), 0) {}

    const Netlist& netlist() const { return *nl_; }

    // Scalar evaluation: one value per input bus in declaration order.
    std::vector<std::uint64_t> run(std::span<const std::uint64_t> bus_values) {
        detail::load_scalar_inputs(*nl_, bus_values, nodes_);
        detail::eval_gates(*nl_, nodes_);
        std::vector<std::uint64_t> out(nl_->outputs.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = detail::read_scalar_output(nl_->outputs[i], nodes_);
        return out;
    }

    std::uint64_t run1(std::span<const std::uint64_t> bus_values) {
        detail::load_scalar_inputs(*nl_, bus_values, nodes_);
        detail::eval_gates(*nl_, nodes_);
        return detail::read_scalar_output(nl_->outputs.at(0), nodes_);
    }
    std::uint64_t run1(std::uint64_t a, std::uint64_t b) {
        const std::uint64_t in[2] = {a, b};
        return run1(in);
    }

    // Packed evaluation of n <= 64 assignments in one pass; inputs[b][s] is
    // the value of bus b in sample s, outputs are shaped the same way.
    void run_packed(const std::vector<std::vector<std::uint64_t>>& inputs,
                    std::vector<std::vector<std::uint64_t>>& outputs) {
        if (inputs.size() != nl_->inputs.size())
            throw std::invalid_argument("input bus count mismatch");
        const std::size_t n = inputs.empty() ? 0 : inputs[0].size();
        if (n > 64) throw std::invalid_argument("packed evaluation is limited to 64 lanes");
        std::uint32_t base = 0;
        for (std::size_t b = 0; b < inputs.size(); ++b) {
            if (inputs[b].size() != n) throw std::invalid_argument("ragged packed input");
            const std::uint32_t w = nl_->inputs[b].width;
            for (std::uint32_t i = 0; i < w; ++i) {
                Word lanes = 0;
                for (std::size_t s = 0; s < n; ++s)
                    lanes |= ((inputs[b][s] >> i) & 1u) << s;
                nodes_[base + i] = lanes;
            }
            base += w;
        }
        detail::eval_gates(*nl_, nodes_);
        outputs.resize(nl_->outputs.size());
        for (std::size_t o = 0; o < outputs.size(); ++o) {
            auto& ov = outputs[o];
            ov.assign(n, 0);
            const auto& bits = nl_->outputs[o].bits;
            for (std::size_t i = 0; i < bits.size(); ++i) {
                const Word lanes = nodes_[bits[i]];
                for (std::size_t s = 0; s < n; ++s)
                    ov[s] |= ((lanes >> s) & 1u) << i;
            }
        }
    }

private:
    const Netlist* nl_;
    std::vector<Word> nodes_;
};

// Pure functional evaluation of a validated netlist.
inline std::vector<std::uint64_t> evaluate(const Netlist& nl,
                                           std::span<const std::uint64_t> bus_values) {
    Evaluator ev(nl);
    return ev.run(bus_values);
}

struct FaultConfig {
    double p_err = 0.0;               // per-node flip probability per evaluation
    std::uint64_t trials = 1;
    std::uint64_t base_seed = 0;
    bool voters_fault_free = false;
    std::optional<std::vector<NodeId>> fault_region; // restrict flips to these gate nodes

    void check(double p = -1) const {
        const double pe = p < 0 ? p_err : p;
        if (!(pe >= 0.0 && pe <= 1.0))
            throw std::invalid_argument("p_err must be in [0,1]");
        if (trials == 0) throw std::invalid_argument("trials must be positive");
    }
};

// Fault-injecting evaluator: after each gate computes, its output bit may flip
// with probability p_err. Flip decisions are a pure function of
// (base_seed, trial_index, node id), so results do not depend on evaluation
// order or on how trials are partitioned across workers. Primary inputs never
// flip; scalar lanes only.
class FaultEvaluator {
public:
    FaultEvaluator(const Netlist& nl, const FaultConfig& cfg)
        : nl_(&nl), cfg_(cfg), nodes_(nl.node_count(), 0),
          threshold_(flip_threshold(cfg.p_err)) {
        cfg.check();
        flippable_.assign(nl.node_count(), 1);
        if (cfg.fault_region) {
            const std::uint32_t n_in = nl.input_bit_count();
            std::vector<std::uint8_t> is_gate(nl.node_count(), 0);
            for (const auto& g : nl.gates) is_gate[g.id] = 1;
            std::fill(flippable_.begin(), flippable_.end(), 0);
            for (NodeId id : *cfg.fault_region) {
                if (id < n_in || id >= nl.node_count() || !is_gate[id])
                    throw std::invalid_argument(
                        "fault_region must be a subset of gate-output node ids");
                flippable_[id] = 1;
            }
        }
        if (cfg.voters_fault_free)
            for (const auto& g : nl.gates)
                if (g.tag == NodeTag::Voter) flippable_[g.id] = 0;
    }

    std::vector<std::uint64_t> run(std::span<const std::uint64_t> bus_values,
                                   std::uint64_t trial) {
        run_nodes(bus_values, trial);
        std::vector<std::uint64_t> out(nl_->outputs.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = detail::read_scalar_output(nl_->outputs[i], nodes_);
        return out;
    }

    std::uint64_t run1(std::span<const std::uint64_t> bus_values, std::uint64_t trial) {
        run_nodes(bus_values, trial);
        return detail::read_scalar_output(nl_->outputs.at(0), nodes_);
    }
    std::uint64_t run1(std::uint64_t a, std::uint64_t b, std::uint64_t trial) {
        const std::uint64_t in[2] = {a, b};
        return run1(in, trial);
    }

    // Re-seat the stream key, e.g. one derived key per application-level trial.
    void reseed(std::uint64_t seed) { seed_override_ = seed; }

private:
    void run_nodes(std::span<const std::uint64_t> bus_values, std::uint64_t trial) {
        detail::load_scalar_inputs(*nl_, bus_values, nodes_);
        const std::uint64_t seed = seed_override_.value_or(cfg_.base_seed);
        if (threshold_ == 0) {
            detail::eval_gates(*nl_, nodes_);
            return;
        }
        for (const auto& g : nl_->gates) {
            Word v;
            switch (g.kind) {
                case GateKind::And2: v = nodes_[g.in0] & nodes_[g.in1]; break;
                case GateKind::Or2:  v = nodes_[g.in0] | nodes_[g.in1]; break;
                case GateKind::Xor2: v = nodes_[g.in0] ^ nodes_[g.in1]; break;
                case GateKind::Not:  v = ~nodes_[g.in0]; break;
                case GateKind::Buf:  v = nodes_[g.in0]; break;
                case GateKind::Const0: v = 0; break;
                default:             v = ~Word{0}; break;
            }
            if (flippable_[g.id] && bernoulli_site(seed, trial, g.id, threshold_)) v ^= 1u;
            nodes_[g.id] = v;
        }
    }

    const Netlist* nl_;
    FaultConfig cfg_;
    std::vector<Word> nodes_;
    std::vector<std::uint8_t> flippable_;
    std::uint64_t threshold_;
    std::optional<std::uint64_t> seed_override_;
};

// One-shot fault-injected evaluation for trial_index < cfg.trials.
inline std::vector<std::uint64_t> inject_evaluate(const Netlist& nl,
                                                  std::span<const std::uint64_t> bus_values,
                                                  const FaultConfig& cfg,
                                                  std::uint64_t trial_index) {
    if (trial_index >= cfg.trials)
        throw std::invalid_argument("trial_index must be < cfg.trials");
    FaultEvaluator fe(nl, cfg);
    return fe.run(bus_values, trial_index);
}

struct CostWeights {
    std::array<double, 7> area{};  // indexed by GateKind
    std::array<double, 7> delay{};

    // 1 unit per logic gate, 0 for constants.
    static CostWeights unit() {
        CostWeights w;
        for (int i = 0; i < 7; ++i) {
            auto k = static_cast<GateKind>(i);
            const double u = gate_fanin(k) == 0 ? 0.0 : 1.0;
            w.area[i] = u;
            w.delay[i] = u;
        }
        return w;
    }
    double area_of(GateKind k) const { return area[static_cast<int>(k)]; }
    double delay_of(GateKind k) const { return delay[static_cast<int>(k)]; }
};

struct CostReport {
    double area = 0;
    double delay = 0;
    double adp = 0; // area * delay, exactly
};

// Area = weighted gate count; delay = max over output bits of the longest
// weighted path from any primary input.
inline CostReport cost(const Netlist& nl, const CostWeights& w = CostWeights::unit()) {
    CostReport r;
    std::vector<double> depth(nl.node_count(), 0.0);
    for (const auto& g : nl.gates) {
        r.area += w.area_of(g.kind);
        double d = 0;
        const int fanin = gate_fanin(g.kind);
        if (fanin >= 1) d = depth[g.in0];
        if (fanin >= 2) d = std::max(d, depth[g.in1]);
        depth[g.id] = d + w.delay_of(g.kind);
    }
    for (const auto& ob : nl.outputs)
        for (NodeId bit : ob.bits) r.delay = std::max(r.delay, depth[bit]);
    r.adp = r.area * r.delay;
    return r;
}

// Three structurally identical replicas sharing the primary inputs, plus a
// 2-of-3 majority voter (3 AND2 + 2 OR2, voter-tagged) per output bit.
inline Netlist triplicate_with_vote(const Netlist& nl) {
    require_valid(nl);
    const std::uint32_t n_in = nl.input_bit_count();
    const std::size_t n_gates = nl.gates.size();

    Netlist out;
    out.inputs = nl.inputs;
    out.gates.reserve(3 * n_gates + 5 * 32);

    // position of each original gate id in nl.gates (ids may be non-positional)
    std::vector<std::uint32_t> pos(nl.node_count(), 0);
    for (std::size_t i = 0; i < n_gates; ++i) pos[nl.gates[i].id] = static_cast<std::uint32_t>(i);

    auto replica_id = [&](int r, NodeId orig) -> NodeId {
        if (orig < n_in) return orig; // shared primary input
        return static_cast<NodeId>(n_in + r * n_gates + pos[orig]);
    };
    for (int r = 0; r < 3; ++r) {
        for (const auto& g : nl.gates) {
            Gate ng = g;
            ng.id = replica_id(r, g.id);
            const int fanin = gate_fanin(g.kind);
            if (fanin >= 1) ng.in0 = replica_id(r, g.in0);
            if (fanin >= 2) ng.in1 = replica_id(r, g.in1);
            if (ng.tag == NodeTag::Plain) ng.tag = NodeTag::Protected;
            out.gates.push_back(ng);
        }
    }

    NodeId next = static_cast<NodeId>(n_in + 3 * n_gates);
    auto add_gate = [&](GateKind k, NodeId a, NodeId b, NodeTag tag) {
        out.gates.push_back({next, k, a, b, tag});
        return next++;
    };
    for (const auto& ob : nl.outputs) {
        OutputBus nb{ob.name, {}};
        nb.bits.reserve(ob.bits.size());
        for (NodeId bit : ob.bits) {
            const NodeId x = replica_id(0, bit), y = replica_id(1, bit), z = replica_id(2, bit);
            const NodeId xy = add_gate(GateKind::And2, x, y, NodeTag::Voter);
            const NodeId xz = add_gate(GateKind::And2, x, z, NodeTag::Voter);
            const NodeId yz = add_gate(GateKind::And2, y, z, NodeTag::Voter);
            const NodeId o1 = add_gate(GateKind::Or2, xy, xz, NodeTag::Voter);
            nb.bits.push_back(add_gate(GateKind::Or2, o1, yz, NodeTag::Voter));
        }
        out.outputs.push_back(std::move(nb));
    }
    return out;
}

inline std::vector<NodeId> nodes_with_tag(const Netlist& nl, NodeTag tag) {
    std::vector<NodeId> ids;
    for (const auto& g : nl.gates)
        if (g.tag == tag) ids.push_back(g.id);
    return ids;
}

} // namespace softreal
