#include <catch2/catch_amalgamated.hpp>

#include "softreal/netlist.hpp"
#include "softreal/netlist_json.hpp"
#include "softreal/blocks.hpp"

using namespace softreal;

namespace {

// hand-built full adder: inputs a, b, cin; outputs sum, cout
Netlist make_full_adder() {
    Netlist nl;
    nl.inputs = {{"a", 1}, {"b", 1}, {"cin", 1}};
    nl.gates = {
        {3, GateKind::Xor2, 0, 1, NodeTag::Plain},
        {4, GateKind::Xor2, 3, 2, NodeTag::Plain},
        {5, GateKind::And2, 0, 1, NodeTag::Plain},
        {6, GateKind::And2, 3, 2, NodeTag::Plain},
        {7, GateKind::Or2, 5, 6, NodeTag::Plain},
    };
    nl.outputs = {{"sum", {4}}, {"cout", {7}}};
    return nl;
}

} // namespace

TEST_CASE("validate accepts a minimal well-formed netlist") {
    Netlist nl;
    nl.inputs = {{"a", 1}, {"b", 1}};
    nl.gates = {{2, GateKind::And2, 0, 1, NodeTag::Plain}};
    nl.outputs = {{"y", {2}}};
    CHECK(validate(nl).empty());
}

TEST_CASE("validate flags forward references and dangling outputs") {
    Netlist nl;
    nl.inputs = {{"a", 1}, {"b", 1}};
    nl.gates = {
        {2, GateKind::And2, 0, 3, NodeTag::Plain}, // refers to node defined later
        {3, GateKind::Or2, 0, 1, NodeTag::Plain},
    };
    nl.outputs = {{"y", {2}}};
    auto v = validate(nl);
    REQUIRE(v.size() == 1);
    CHECK(v[0].rule == "topological order");
    CHECK(v[0].node == 2);

    Netlist nl2;
    nl2.inputs = {{"a", 1}, {"b", 1}};
    nl2.gates = {{2, GateKind::And2, 0, 1, NodeTag::Plain}};
    nl2.outputs = {{"y", {9}}};
    auto v2 = validate(nl2);
    REQUIRE(v2.size() == 1);
    CHECK(v2[0].rule.starts_with("dangling output"));
}

TEST_CASE("validate flags duplicate and non-dense ids") {
    Netlist nl;
    nl.inputs = {{"a", 1}};
    nl.gates = {{1, GateKind::Not, 0, 0, NodeTag::Plain},
                {1, GateKind::Not, 0, 0, NodeTag::Plain}};
    nl.outputs = {{"y", {1}}};
    auto v = validate(nl);
    REQUIRE_FALSE(v.empty());
    CHECK(v[0].rule == "duplicate node id");

    Netlist nl2;
    nl2.inputs = {{"a", 1}};
    nl2.gates = {{5, GateKind::Not, 0, 0, NodeTag::Plain}};
    nl2.outputs = {{"y", {5}}};
    auto v2 = validate(nl2);
    REQUIRE_FALSE(v2.empty());
    CHECK(v2[0].rule == "node id not dense");
}

TEST_CASE("full adder truth table") {
    Netlist fa = make_full_adder();
    REQUIRE(validate(fa).empty());
    Evaluator ev(fa);

    const std::uint64_t in111[] = {1, 1, 1};
    auto out = ev.run(in111);
    CHECK(out[0] == 1); // sum
    CHECK(out[1] == 1); // cout

    const std::uint64_t in100[] = {1, 0, 0};
    out = ev.run(in100);
    CHECK(out[0] == 1);
    CHECK(out[1] == 0);

    // all 8 rows against integer addition
    for (std::uint64_t a = 0; a < 2; ++a)
        for (std::uint64_t b = 0; b < 2; ++b)
            for (std::uint64_t c = 0; c < 2; ++c) {
                const std::uint64_t in[] = {a, b, c};
                auto o = ev.run(in);
                CHECK(o[0] + 2 * o[1] == a + b + c);
            }
}

TEST_CASE("evaluate rejects out-of-width input values") {
    Netlist nl;
    nl.inputs = {{"a", 2}, {"b", 2}};
    nl.gates = {{4, GateKind::And2, 0, 2, NodeTag::Plain}};
    nl.outputs = {{"y", {4}}};
    Evaluator ev(nl);
    const std::uint64_t bad[] = {4, 0};
    CHECK_THROWS_AS(ev.run(bad), std::invalid_argument);
}

TEST_CASE("rca(8) equals integer addition on all 65536 pairs") {
    Netlist nl = build_rca(8);
    REQUIRE(validate(nl).empty());
    Evaluator ev(nl);
    for (std::uint64_t a = 0; a < 256; ++a)
        for (std::uint64_t b = 0; b < 256; ++b)
            REQUIRE(ev.run1(a, b) == a + b);
}

TEST_CASE("packed evaluation matches scalar evaluation") {
    Netlist nl = build_rca(6);
    Evaluator ev(nl);
    std::vector<std::vector<std::uint64_t>> in(2), out;
    for (std::uint64_t s = 0; s < 64; ++s) {
        in[0].push_back((s * 37) & 63);
        in[1].push_back((s * 11 + 5) & 63);
    }
    ev.run_packed(in, out);
    Evaluator scalar(nl);
    for (std::size_t s = 0; s < 64; ++s)
        CHECK(out[0][s] == scalar.run1(in[0][s], in[1][s]));
}

TEST_CASE("inject_evaluate with p_err=0 equals evaluate exhaustively") {
    Netlist nl = build_rca(4);
    FaultConfig cfg;
    cfg.p_err = 0.0;
    cfg.trials = 4;
    cfg.base_seed = 99;
    FaultEvaluator fe(nl, cfg);
    Evaluator ev(nl);
    for (std::uint64_t a = 0; a < 16; ++a)
        for (std::uint64_t b = 0; b < 16; ++b)
            CHECK(fe.run1(a, b, a % 4) == ev.run1(a, b));
}

TEST_CASE("single OR gate flip rate matches binomial statistics") {
    Netlist nl;
    nl.inputs = {{"a", 1}, {"b", 1}};
    nl.gates = {{2, GateKind::Or2, 0, 1, NodeTag::Plain}};
    nl.outputs = {{"y", {2}}};

    FaultConfig cfg;
    cfg.p_err = 0.25;
    cfg.trials = 100000;
    cfg.base_seed = 7;
    FaultEvaluator fe(nl, cfg);
    std::uint64_t ones = 0;
    for (std::uint64_t t = 0; t < cfg.trials; ++t) ones += fe.run1(0, 0, t);
    const double mean = static_cast<double>(ones) / static_cast<double>(cfg.trials);
    // 3 sigma of Binomial(1e5, 0.25)
    CHECK(std::fabs(mean - 0.25) <= 0.0041);
}

TEST_CASE("fault injection is reproducible for fixed (seed, trial)") {
    Netlist nl = build_rca(8);
    FaultConfig cfg;
    cfg.p_err = 0.2;
    cfg.trials = 50;
    cfg.base_seed = 1234;
    FaultEvaluator fe1(nl, cfg), fe2(nl, cfg);
    for (std::uint64_t t = 0; t < 50; ++t) {
        const std::uint64_t r1 = fe1.run1(200, 55, t);
        CHECK(r1 == fe2.run1(200, 55, t));
        CHECK(r1 == fe1.run1(200, 55, t)); // repeated call, same stream
    }
}

TEST_CASE("fault_region must reference gate nodes") {
    Netlist nl = build_rca(4);
    FaultConfig cfg;
    cfg.p_err = 0.5;
    cfg.fault_region = std::vector<NodeId>{0}; // primary input
    CHECK_THROWS_AS(FaultEvaluator(nl, cfg), std::invalid_argument);
}

TEST_CASE("cost of canonical constructions") {
    // one full adder: 5 gates, default weights
    auto fa = make_full_adder();
    auto r = cost(fa);
    CHECK(r.area == 5.0);
    CHECK(r.adp == r.area * r.delay);

    // rca(4): area 20, carry-out depth 2p+1 = 9
    auto rca = build_rca(4);
    auto rc = cost(rca);
    CHECK(rc.area == 20.0);
    CHECK(rc.delay == 9.0);
    CHECK(rc.adp == 180.0);

    // inputs wired through zero-weight BUFs: everything zero
    Netlist thru;
    thru.inputs = {{"a", 2}};
    thru.gates = {{2, GateKind::Buf, 0, 0, NodeTag::Plain},
                  {3, GateKind::Buf, 1, 0, NodeTag::Plain}};
    thru.outputs = {{"y", {2, 3}}};
    CostWeights w = CostWeights::unit();
    w.area[static_cast<int>(GateKind::Buf)] = 0;
    w.delay[static_cast<int>(GateKind::Buf)] = 0;
    auto rt = cost(thru, w);
    CHECK(rt.area == 0.0);
    CHECK(rt.delay == 0.0);
    CHECK(rt.adp == 0.0);
}

TEST_CASE("cost additivity and critical-path growth") {
    // two disjoint gates in one netlist: areas add
    Netlist two;
    two.inputs = {{"a", 2}, {"b", 2}};
    two.gates = {{4, GateKind::And2, 0, 1, NodeTag::Plain},
                 {5, GateKind::Or2, 2, 3, NodeTag::Plain}};
    two.outputs = {{"x", {4}}, {"y", {5}}};
    auto r2 = cost(two);
    CHECK(r2.area == 2.0);
    CHECK(r2.delay == 1.0);

    // appending a gate on the critical path never decreases the delay
    Netlist ext = two;
    ext.gates.push_back({6, GateKind::Xor2, 4, 5, NodeTag::Plain});
    ext.outputs = {{"z", {6}}};
    auto re = cost(ext);
    CHECK(re.area == 3.0);
    CHECK(re.delay == 2.0);
}

TEST_CASE("triplicate_with_vote preserves function and obeys the area formula") {
    Netlist rca = build_rca(4);
    Netlist tmr = triplicate_with_vote(rca);
    REQUIRE(validate(tmr).empty());

    Evaluator e0(rca), e1(tmr);
    for (std::uint64_t a = 0; a < 16; ++a)
        for (std::uint64_t b = 0; b < 16; ++b)
            REQUIRE(e1.run1(a, b) == e0.run1(a, b));

    const auto base = cost(rca), trip = cost(tmr);
    const double out_bits = 5.0;
    CHECK(trip.area == 3 * base.area + 5 * out_bits);
}

TEST_CASE("TMR masks every single-replica fault (4-bit RCA, exhaustive)") {
    Netlist tmr = triplicate_with_vote(build_rca(4));
    Evaluator ref(tmr);

    for (NodeId site : nodes_with_tag(tmr, NodeTag::Protected)) {
        FaultConfig cfg;
        cfg.p_err = 1.0; // forced flip at exactly this node
        cfg.trials = 1;
        cfg.voters_fault_free = true;
        cfg.fault_region = std::vector<NodeId>{site};
        FaultEvaluator fe(tmr, cfg);
        for (std::uint64_t a = 0; a < 16; ++a)
            for (std::uint64_t b = 0; b < 16; ++b)
                REQUIRE(fe.run1(a, b, 0) == a + b);
    }
}

TEST_CASE("netlist JSON round trip") {
    Netlist nl = build_loa(5, 2);
    const std::string text = netlist_to_json_text(nl);
    Netlist back = netlist_from_json_text(text);
    CHECK(netlist_to_json_text(back) == text);

    Evaluator e0(nl), e1(back);
    for (std::uint64_t a = 0; a < 32; ++a)
        for (std::uint64_t b = 0; b < 32; ++b)
            REQUIRE(e0.run1(a, b) == e1.run1(a, b));
}

TEST_CASE("netlist JSON loader rejects malformed input") {
    CHECK_THROWS_AS(netlist_from_json_text("{"), std::invalid_argument);
    CHECK_THROWS_AS(netlist_from_json_text(R"({"inputs":[],"gates":[],"outputs":[{"name":"y","bits":[0]}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(netlist_from_json_text(
                        R"({"inputs":[{"name":"a","width":1}],
                            "gates":[{"id":1,"kind":"NAND2","in":[0,0]}],
                            "outputs":[]})"),
                    std::invalid_argument);
}
