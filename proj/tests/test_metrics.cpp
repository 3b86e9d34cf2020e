#include <catch2/catch_amalgamated.hpp>

#include "softreal/blocks.hpp"
#include "softreal/metrics.hpp"

using namespace softreal;

namespace {
const BinaryFn add_oracle = [](std::uint64_t a, std::uint64_t b) { return a + b; };
const BinaryFn mul_oracle = [](std::uint64_t a, std::uint64_t b) { return a * b; };

void check_report_identity(const ErrorReport& r) {
    const double lhs = r.mse;
    const double rhs = r.aev + r.mae * r.mae;
    CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(1.0, std::fabs(lhs)));
    CHECK(r.mae <= static_cast<double>(r.max_abs));
    CHECK(r.mse >= r.mae * r.mae - 1e-12);
}
} // namespace

TEST_CASE("exhaustive_error of a block against itself is all zero") {
    auto r = exhaustive_error(add_oracle, add_oracle, 6);
    CHECK(r.mae == 0.0);
    CHECK(r.mse == 0.0);
    CHECK(r.aev == 0.0);
    CHECK(r.max_abs == 0);
    CHECK(r.count == 4096);
    CHECK(r.exhaustive);
    check_report_identity(r);
}

TEST_CASE("exhaustive_error refuses widths over the cap by naming it") {
    try {
        exhaustive_error(add_oracle, add_oracle, 13);
        FAIL("expected refusal");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("24") != std::string::npos);
    }
}

TEST_CASE("function route and netlist route produce identical reports") {
    const std::uint32_t p = 4, lpl = 2;
    auto fn_route = exhaustive_error(
        [&](std::uint64_t a, std::uint64_t b) { return loa_value(a, b, p, lpl); }, add_oracle, p);
    auto nl_route = exhaustive_error(build_loa(p, lpl), add_oracle, p);
    CHECK(fn_route.mae == nl_route.mae);
    CHECK(fn_route.mse == nl_route.mse);
    CHECK(fn_route.aev == nl_route.aev);
    CHECK(fn_route.max_abs == nl_route.max_abs);
    CHECK(fn_route.count == nl_route.count);
    // frozen by the brute-force oracle
    CHECK(fn_route.mae == 0.625);
    CHECK(fn_route.mse == 1.0);
    check_report_identity(fn_route);
}

TEST_CASE("monte carlo: identical blocks give a zero report for any seed") {
    for (std::uint64_t seed : {0ull, 7ull, 123456789ull}) {
        auto r = monte_carlo_error(add_oracle, add_oracle, InputDistribution::uniform(), 8,
                                   5000, seed);
        CHECK(r.mae == 0.0);
        CHECK(r.max_abs == 0);
        CHECK_FALSE(r.exhaustive);
    }
}

TEST_CASE("monte carlo is deterministic and jobs-invariant") {
    Netlist loa = build_loa(6, 3);
    auto r1 = monte_carlo_error(loa, add_oracle, InputDistribution::uniform(), 6, 20000, 42, 1);
    auto r2 = monte_carlo_error(loa, add_oracle, InputDistribution::uniform(), 6, 20000, 42, 3);
    CHECK(r1.mae == r2.mae);
    CHECK(r1.mse == r2.mse);
    CHECK(r1.aev == r2.aev);
    CHECK(r1.max_abs == r2.max_abs);
    check_report_identity(r1);
}

TEST_CASE("monte carlo mae agrees with exhaustive mae within 3 sigma") {
    const std::uint32_t p = 4, lpl = 2;
    auto ex = exhaustive_error(build_loa(p, lpl), add_oracle, p);
    const std::uint64_t n = 1000000;
    auto mc = monte_carlo_error(build_loa(p, lpl), add_oracle, InputDistribution::uniform(),
                                p, n, 2024, 2);
    const double sigma = std::sqrt(mc.aev / static_cast<double>(n));
    CHECK(std::fabs(mc.mae - ex.mae) <= 3 * sigma + 1e-12);
}

TEST_CASE("fault_error with p_err 0 is all zero") {
    FaultConfig cfg;
    cfg.p_err = 0;
    cfg.trials = 2000;
    cfg.base_seed = 5;
    auto r = fault_error(build_rca(8), cfg, InputDistribution::uniform(), add_oracle);
    CHECK(r.mae == 0.0);
    CHECK(r.max_abs == 0);
}

TEST_CASE("rrca with faults confined to the unprotected region stays bounded") {
    Netlist nl = build_rrca(8, 3);
    FaultConfig cfg;
    cfg.p_err = 0.05;
    cfg.trials = 10000;
    cfg.base_seed = 31337;
    cfg.voters_fault_free = true;
    cfg.fault_region = nodes_with_tag(nl, NodeTag::Plain);
    auto r = fault_error(nl, cfg, InputDistribution::uniform(), add_oracle, 2);
    // lower-bit flips <= 2^3 - 1 plus the boundary-carry flip 2^3
    CHECK(r.max_abs < 16);
    CHECK(r.count == 10000);
    check_report_identity(r);
}

TEST_CASE("paired fault simulation: full TMR beats the unprotected adder") {
    FaultConfig cfg;
    cfg.p_err = 1e-3;
    cfg.trials = 30000;
    cfg.base_seed = 9001;
    auto tmr = fault_error(build_rrca(8, 0), cfg, InputDistribution::uniform(), add_oracle, 2);
    auto plain = fault_error(build_rca(8), cfg, InputDistribution::uniform(), add_oracle, 2);
    CHECK(tmr.mse < plain.mse);
}

TEST_CASE("fault_error is reproducible and jobs-invariant") {
    Netlist nl = build_rrca(6, 2);
    FaultConfig cfg;
    cfg.p_err = 0.01;
    cfg.trials = 20000;
    cfg.base_seed = 77;
    auto r1 = fault_error(nl, cfg, InputDistribution::uniform(), add_oracle, 1);
    auto r2 = fault_error(nl, cfg, InputDistribution::uniform(), add_oracle, 4);
    CHECK(r1.mse == r2.mse);
    CHECK(r1.mae == r2.mae);
    CHECK(r1.max_abs == r2.max_abs);
}

TEST_CASE("improvement percentage formula") {
    // reference-table reproductions with round-half-away-from-zero within +-1
    CHECK(std::fabs(improvement_pct(4000, 2586) - 54.68) < 0.01);
    CHECK(std::llabs(round_half_away(improvement_pct(4000, 2586)) - 54) <= 1);
    CHECK(std::fabs(improvement_pct(171072, 64860) - 163.76) < 0.01);
    CHECK(std::llabs(round_half_away(improvement_pct(171072, 64860)) - 163) <= 1);
    CHECK(improvement_pct(123.0, 123.0) == 0.0);

    CHECK_THROWS_AS(improvement_pct(10, 0), std::domain_error);
    CHECK_THROWS_AS(improvement_pct(10, -2), std::domain_error);
}

TEST_CASE("improvement is sign anti-symmetric") {
    for (double a : {1.0, 17.5, 4000.0})
        for (double b : {2.0, 17.5, 2586.0}) {
            const double ab = improvement_pct(a, b), ba = improvement_pct(b, a);
            if (a == b) {
                CHECK(ab == 0.0);
                CHECK(ba == 0.0);
            } else {
                CHECK(((ab > 0) != (ba > 0)));
            }
        }
}

TEST_CASE("cost report improvement runs per field") {
    CostReport ref{4000, 17.98, 4000 * 17.98};
    CostReport cand{2586, 13.84, 2586 * 13.84};
    auto imp = improvement(ref, cand);
    CHECK(std::llabs(round_half_away(imp.area) - 55) <= 1);
    CHECK(round_half_away(imp.delay) == 30);
}

TEST_CASE("LOA mae is non-decreasing in lpl (exhaustive, p <= 8)") {
    for (std::uint32_t p : {4u, 6u, 8u}) {
        double prev = -1;
        for (std::uint32_t lpl = 0; lpl <= p; ++lpl) {
            auto r = exhaustive_error(
                [&](std::uint64_t a, std::uint64_t b) { return loa_value(a, b, p, lpl); },
                add_oracle, p);
            CHECK(r.mae >= prev);
            prev = r.mae;
            check_report_identity(r);
        }
    }
}

TEST_CASE("report CSV row is stable") {
    ErrorReport r;
    r.mae = 0.625;
    r.mse = 1.0;
    r.aev = 0.609375;
    r.max_abs = 2;
    r.count = 256;
    r.normalizer = 16;
    r.exhaustive = true;
    CHECK(report_csv_row("loa", "wl=4;lpl=2", r, 7) ==
          "loa,wl=4;lpl=2,0.625,1,0.609375,2,256,16,1,7");
    CHECK(report_csv_header() == "block,params,mae,mse,aev,max_abs,count,normalizer,exhaustive,seed");
}

TEST_CASE("fixed-list stimulus cycles through the given pairs") {
    auto dist = InputDistribution::fixed_list({{3, 4}, {10, 20}});
    auto r = monte_carlo_error([](std::uint64_t a, std::uint64_t b) { return a + b + 1; },
                               add_oracle, dist, 8, 1000, 0);
    CHECK(r.mae == 1.0);
    CHECK(r.max_abs == 1);

    CHECK_THROWS_AS(monte_carlo_error(add_oracle, add_oracle,
                                      InputDistribution::fixed_list({}), 8, 10, 0),
                    std::invalid_argument);
}
