#include <catch2/catch_amalgamated.hpp>

#include "softreal/arith.hpp"
#include "softreal/mlp.hpp"
#include "softreal/wpa.hpp"

using namespace softreal;

namespace {

ArithConfig bic_config(std::uint32_t lpl, std::uint32_t hbl, std::uint32_t vbl) {
    ArithConfig c = ArithConfig::precise();
    c.adder.family = BlockFamily::Loa;
    c.adder.lpl = lpl;
    c.multiplier.family = BlockFamily::Bam;
    c.multiplier.hbl = hbl;
    c.multiplier.vbl = vbl;
    return c;
}

ArithConfig rtmr_config(std::uint32_t aul, std::uint32_t hul, std::uint32_t vul, double perr,
                        std::uint64_t seed) {
    ArithConfig c = ArithConfig::precise();
    c.adder.family = BlockFamily::Rrca;
    c.adder.aul = aul;
    c.multiplier.family = BlockFamily::Ram;
    c.multiplier.hul = hul;
    c.multiplier.vul = vul;
    FaultConfig f;
    f.p_err = perr;
    f.trials = ~0ULL;
    f.base_seed = seed;
    f.voters_fault_free = true;
    c.fault = f;
    return c;
}

} // namespace

TEST_CASE("fixed-point quantization rounds half away and saturates") {
    FixedPointFormat f{9, 8};
    CHECK(quantize(f, 0.5).mag == 128);
    CHECK(quantize(f, -0.5).neg);
    CHECK(quantize(f, 0.0019531249).mag == 0); // below half a step... 0.5/256
    CHECK(quantize(f, 0.001953125).mag == 1);  // exactly half a step: away from zero
    CHECK(quantize(f, 100.0).mag == f.max_mag());
    CHECK_FALSE(quantize(f, -0.0).neg);
    CHECK_THROWS_AS(FixedPointFormat({9, 12}).check(), std::invalid_argument);
}

TEST_CASE("mac of small integers with the precise config") {
    FixedPointFormat fmt{8, 0};
    MacUnit mac(fmt, ArithConfig::precise(), 4);
    std::vector<FixedValue> v = {{1, false}, {2, false}, {3, false}};
    std::vector<FixedValue> w = {{1, false}, {1, false}, {1, false}};
    auto r = mac.mac(v, w);
    CHECK(r.value == 6);
    CHECK_FALSE(r.saturated);
}

TEST_CASE("degenerate imprecise config equals the precise config") {
    FixedPointFormat fmt{6, 5};
    MacUnit precise(fmt, ArithConfig::precise(), 8);
    MacUnit degenerate(fmt, bic_config(0, 0, 0), 8);
    CounterStream vs(11, 1), ws(11, 2);
    for (int t = 0; t < 10000; ++t) {
        std::vector<FixedValue> v(8), w(8);
        for (int i = 0; i < 8; ++i) {
            v[i] = {static_cast<std::uint32_t>(vs.below(8 * t + i, 64)), false};
            w[i] = {static_cast<std::uint32_t>(ws.below(8 * t + i, 64)),
                    (ws.word(99999 + 8 * t + i) & 1) != 0};
        }
        const auto a = precise.mac(v, w);
        const auto b = degenerate.mac(v, w);
        REQUIRE(a.value == b.value);
        REQUIRE(a.saturated == b.saturated);
    }
}

TEST_CASE("mac sign-magnitude symmetry") {
    FixedPointFormat fmt{8, 0};
    MacUnit mac(fmt, ArithConfig::precise(), 8);
    CounterStream s(5, 9);
    for (int t = 0; t < 2000; ++t) {
        std::vector<FixedValue> v(5), w(5), wn(5);
        for (int i = 0; i < 5; ++i) {
            v[i] = {static_cast<std::uint32_t>(s.below(10 * t + i, 256)), false};
            w[i] = {static_cast<std::uint32_t>(s.below(10 * t + 5 + i, 256)),
                    (s.word(7777 + 10 * t + i) & 1) != 0};
            wn[i] = {w[i].mag, w[i].mag != 0 && !w[i].neg};
        }
        const auto r = mac.mac(v, w);
        const auto rn = mac.mac(v, wn);
        REQUIRE(r.value == -rn.value);
        // all-positive weights give a non-negative result
        std::vector<FixedValue> wp = w;
        for (auto& x : wp) x.neg = false;
        REQUIRE(mac.mac(v, wp).value >= 0);
    }
}

TEST_CASE("mac saturation is flagged, never silent") {
    // wl=16 with 64 terms wants 38 accumulator bits; the generator caps at 32,
    // so max-magnitude products must overflow and saturate
    FixedPointFormat fmt{16, 0};
    MacUnit mac(fmt, ArithConfig::precise(), 64);
    CHECK(mac.acc_width() == 32);
    std::vector<FixedValue> v(64, FixedValue{65535, false});
    std::vector<FixedValue> w(64, FixedValue{65535, false});
    auto r = mac.mac(v, w);
    CHECK(r.saturated);
    CHECK(r.value == (1ll << 32) - 1);
}

TEST_CASE("BIC mac is pinned by functional-model replay") {
    FixedPointFormat fmt{9, 9};
    MacUnit mac(fmt, bic_config(2, 2, 6), 16);
    CounterStream vs(77, 1), ws(77, 2);
    std::vector<FixedValue> v(16), w(16);
    for (int i = 0; i < 16; ++i) {
        v[i] = {static_cast<std::uint32_t>(vs.below(i, 512)), false};
        w[i] = {static_cast<std::uint32_t>(ws.below(i, 512)), (ws.word(100 + i) & 1) != 0};
    }
    const auto r = mac.mac(v, w);

    // independent replay through loa_value/bam_value with the documented
    // accumulator scale rule (lower lengths widen by frac)
    const std::uint32_t a_width = 2 * 9 + ceil_log2(16);
    const std::uint64_t mask = (std::uint64_t{1} << a_width) - 1;
    std::uint64_t pos = 0, neg = 0;
    for (int i = 0; i < 16; ++i) {
        const std::uint64_t p = bam_value(v[i].mag, w[i].mag, 9, 2, 6) & mask;
        std::uint64_t& acc = (v[i].neg ^ w[i].neg) ? neg : pos;
        const std::uint64_t s = loa_value(acc, p, a_width, std::min(a_width, 2 + 9u));
        acc = s > mask ? mask : s;
    }
    CHECK(r.value == static_cast<std::int64_t>(pos) - static_cast<std::int64_t>(neg));
    CHECK(r.value == 6144); // frozen
}

TEST_CASE("single neuron with hard threshold") {
    MlpModel m;
    m.topology = {1, 1};
    m.fmt = {4, 2};
    m.act = Activation::HardThreshold;
    m.threshold = quantize(m.fmt, 0.5);
    m.weights = {{quantize(m.fmt, 1.0)}};
    const FixedValue in[] = {quantize(m.fmt, 0.75)};
    auto out = mlp_forward(m, in, ArithConfig::precise());
    CHECK(to_real(m.fmt, out[0]) == 1.0);

    const FixedValue lo[] = {quantize(m.fmt, 0.25)};
    out = mlp_forward(m, lo, ArithConfig::precise());
    CHECK(out[0].mag == 0);
}

TEST_CASE("mlp forward: degenerate imprecise config matches precise") {
    MlpModel m;
    m.topology = {6, 4, 2};
    m.fmt = {9, 8};
    m.act = Activation::PiecewiseSigmoid;
    CounterStream ws(3, 3);
    std::uint64_t k = 0;
    m.weights.resize(2);
    for (std::size_t l = 0; l < 2; ++l)
        for (std::uint32_t i = 0; i < m.topology[l] * m.topology[l + 1]; ++i)
            m.weights[l].push_back(
                {static_cast<std::uint32_t>(ws.below(k, 300)), (ws.word(555 + k++) & 1) != 0});

    MlpEngine precise(m, ArithConfig::precise());
    MlpEngine degenerate(m, bic_config(0, 0, 0));
    CounterStream xs(4, 4);
    for (int t = 0; t < 1000; ++t) {
        std::vector<FixedValue> in(6);
        for (int i = 0; i < 6; ++i)
            in[i] = {static_cast<std::uint32_t>(xs.below(6 * t + i, 256)), false};
        REQUIRE(precise.forward(in) == degenerate.forward(in));
    }
}

TEST_CASE("mlp forward: fault-free RFT config matches precise") {
    MlpModel m;
    m.topology = {8, 4, 2};
    m.fmt = {6, 6};
    m.act = Activation::PiecewiseSigmoid;
    CounterStream ws(13, 3);
    std::uint64_t k = 0;
    m.weights.resize(2);
    for (std::size_t l = 0; l < 2; ++l)
        for (std::uint32_t i = 0; i < m.topology[l] * m.topology[l + 1]; ++i)
            m.weights[l].push_back(
                {static_cast<std::uint32_t>(ws.below(k, 64)), (ws.word(555 + k++) & 1) != 0});

    ArithConfig rtmr = rtmr_config(4, 4, 5, 0.0, 1); // p_err = 0
    MlpEngine precise(m, ArithConfig::precise());
    MlpEngine fault_free(m, rtmr);
    CounterStream xs(14, 4);
    for (int t = 0; t < 500; ++t) {
        std::vector<FixedValue> in(8);
        for (int i = 0; i < 8; ++i)
            in[i] = {static_cast<std::uint32_t>(xs.below(8 * t + i, 64)), false};
        REQUIRE(precise.forward(in) == fault_free.forward(in, t));
    }
}

TEST_CASE("batch forward equals scalar forward") {
    MlpModel m;
    m.topology = {5, 3, 2};
    m.fmt = {9, 9};
    m.act = Activation::PiecewiseSigmoid;
    CounterStream ws(21, 3);
    std::uint64_t k = 0;
    m.weights.resize(2);
    for (std::size_t l = 0; l < 2; ++l)
        for (std::uint32_t i = 0; i < m.topology[l] * m.topology[l + 1]; ++i)
            m.weights[l].push_back(
                {static_cast<std::uint32_t>(ws.below(k, 500)), (ws.word(42 + k++) & 1) != 0});
    MlpEngine eng(m, ArithConfig::precise());

    std::vector<std::vector<FixedValue>> in(64, std::vector<FixedValue>(5));
    CounterStream xs(22, 4);
    for (int s = 0; s < 64; ++s)
        for (int i = 0; i < 5; ++i)
            in[s][i] = {static_cast<std::uint32_t>(xs.below(5 * s + i, 512)), false};
    std::vector<std::vector<FixedValue>> out;
    eng.forward_batch(in, out);
    for (int s = 0; s < 64; ++s) REQUIRE(out[s] == eng.forward(in[s]));
}

TEST_CASE("activation LUT is monotone with range [0,1)") {
    FixedPointFormat f{9, 9};
    detail::ActLut lut(f);
    std::uint32_t prev = 0;
    for (std::int64_t x = -5 * (1 << 18); x <= 5 * (1 << 18); x += 997) {
        const std::uint32_t y = lut.eval_mag(x);
        REQUIRE(y < (1u << 9));
        if (x > -5 * (1 << 18)) REQUIRE(y >= prev);
        prev = y;
    }
}

TEST_CASE("training reaches the target on separable blobs and is regression-locked") {
    Dataset d = make_blobs(32, 8, 2, 42);
    FixedPointFormat fmt{9, 7};
    TrainConfig tc;
    tc.lr = 3.0;
    tc.max_epochs = 200;
    tc.target_mse = 0.01;
    tc.seed = 7;

    auto pr = mlp_train(d, {8, 6, 2}, fmt, ArithConfig::precise(), tc);
    CHECK_FALSE(pr.report.diverged);
    CHECK(pr.report.final_mse <= 0.01);
    CHECK(pr.report.epochs <= 200);
    CHECK(pr.report.epochs == 133); // frozen TE#
    CHECK(pr.report.correct_pct == 100.0);
    CHECK(pr.report.trace.size() == pr.report.epochs);

    auto br = mlp_train(d, {8, 6, 2}, fmt, bic_config(2, 2, 6), tc);
    CHECK(br.report.final_mse <= 0.01);
    CHECK(br.report.epochs == 134); // frozen TE#
    CHECK(br.report.correct_pct == 100.0);
}

TEST_CASE("training rejects zero max epochs") {
    Dataset d = make_blobs(4, 4, 2, 1);
    TrainConfig tc;
    tc.max_epochs = 0;
    CHECK_THROWS_AS(mlp_train(d, {4, 2}, {9, 8}, ArithConfig::precise(), tc),
                    std::invalid_argument);
}

TEST_CASE("classify metrics on exact and constant models") {
    // hard-threshold identity net reproduces one-hot labels exactly
    MlpModel m;
    m.topology = {2, 2};
    m.fmt = {4, 2};
    m.act = Activation::HardThreshold;
    m.threshold = quantize(m.fmt, 0.5);
    m.weights = {{quantize(m.fmt, 1.0), quantize(m.fmt, 0.0), quantize(m.fmt, 0.0),
                  quantize(m.fmt, 1.0)}};
    Dataset d;
    d.classes = 2;
    d.x = {{0.75, 0.0}, {0.0, 0.75}, {0.75, 0.0}, {0.0, 0.75}};
    d.label = {0, 1, 0, 1};
    // 0.75 * 1.0 >= 0.5 fires; the threshold activation emits exactly 1.0
    auto r = classify_metrics(m, d, ArithConfig::precise());
    CHECK(r.correct_pct == 100.0);
    CHECK(r.mse == 0.0);

    // constant-output model on a balanced 2-class set scores 50%
    MlpModel c = m;
    c.weights = {{quantize(m.fmt, 0.0), quantize(m.fmt, 0.0), quantize(m.fmt, 0.0),
                  quantize(m.fmt, 0.0)}};
    auto rc = classify_metrics(c, d, ArithConfig::precise());
    CHECK(rc.correct_pct == 50.0);
}

TEST_CASE("RTMR inference at small p_err stays near the fault-free accuracy") {
    Dataset d = make_blobs(8, 8, 2, 99);
    FixedPointFormat fmt{6, 6};
    TrainConfig tc;
    tc.lr = 3.0;
    tc.max_epochs = 60;
    tc.target_mse = 0.02;
    tc.seed = 11;
    auto trained = mlp_train(d, {8, 4, 2}, fmt, ArithConfig::precise(), tc);
    const double base_pct = trained.report.correct_pct;

    double worst = 100.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto cfg = rtmr_config(2, 2, 3, 1e-5, 1000 + seed);
        auto r = classify_metrics(trained.model, d, cfg, 1, seed * 1000);
        worst = std::min(worst, r.correct_pct);
    }
    CHECK(worst >= base_pct - 5.0);
}

// --- WPA ----------------------------------------------------------------

TEST_CASE("wpa hand examples") {
    ArithConfig precise = ArithConfig::precise();
    CHECK(wpa_defuzzify({{10, 20, 1}}, precise, 6) == 15);
    CHECK(wpa_defuzzify({{10, 20, 37}}, precise, 6) == 15);

    // two plateaus symmetric about 32 with equal mass
    CHECK(wpa_defuzzify({{20, 24, 5}, {40, 44, 5}}, precise, 6) == 32);

    // round((4*1*1 + 4*3*9) / (4 + 12)) = round(112/16) = 7
    CHECK(wpa_defuzzify({{0, 3, 1}, {8, 11, 3}}, precise, 6) == 7);
}

TEST_CASE("wpa rejects invalid plateau sets") {
    CHECK_THROWS_AS(wpa_defuzzify({}, ArithConfig::precise(), 6), std::invalid_argument);
    CHECK_THROWS_AS(wpa_defuzzify({{5, 3, 1}}, ArithConfig::precise(), 6),
                    std::invalid_argument);
    CHECK_THROWS_AS(wpa_defuzzify({{0, 63, 0}}, ArithConfig::precise(), 6),
                    std::invalid_argument);
    CHECK_THROWS_AS(wpa_defuzzify({{0, 64, 1}}, ArithConfig::precise(), 6),
                    std::invalid_argument);
}

TEST_CASE("wpa crisp output stays within the plateau span (precise config)") {
    WpaEngine eng(6, ArithConfig::precise());
    for (std::uint64_t t = 0; t < 3000; ++t) {
        const PlateauSet ps = random_plateau_set(6, 31, t);
        const std::uint64_t crisp = eng.defuzzify(ps);
        std::uint64_t lo = 63, hi = 0;
        for (const auto& p : ps) {
            if (p.height == 0) continue;
            lo = std::min<std::uint64_t>(lo, p.left);
            hi = std::max<std::uint64_t>(hi, p.right);
        }
        REQUIRE(crisp >= lo);
        REQUIRE(crisp <= hi);
    }
}

TEST_CASE("wpa crisp value is invariant under plateau permutation (precise)") {
    WpaEngine eng(6, ArithConfig::precise());
    for (std::uint64_t t = 0; t < 500; ++t) {
        PlateauSet ps = random_plateau_set(6, 77, t);
        const std::uint64_t a = eng.defuzzify(ps);
        std::reverse(ps.begin(), ps.end());
        REQUIRE(eng.defuzzify(ps) == a);
    }
}

TEST_CASE("defuzz error study: precise config compares clean against itself") {
    auto r = defuzz_error_study(ArithConfig::precise(), 6, 2000, 5, 2);
    CHECK(r.mae == 0.0);
    CHECK(r.max_abs == 0);
    CHECK(r.count == 2000);
}

TEST_CASE("defuzz error study under the B#3-parameter BIC config is regression-locked") {
    auto r = defuzz_error_study(bic_config(2, 1, 6), 6, 10000, 2026, 2);
    CHECK(r.normalizer == 64.0);
    CHECK(r.mae == Catch::Approx(0.9035).epsilon(1e-12));
    CHECK(r.mse == Catch::Approx(3.7515).epsilon(1e-12));
    CHECK(r.max_abs == 62);
    CHECK(r.mae_pct() < 3.0);

    // jobs-invariance
    auto r1 = defuzz_error_study(bic_config(2, 1, 6), 6, 10000, 2026, 1);
    CHECK(r1.mae == r.mae);
    CHECK(r1.mse == r.mse);
}
