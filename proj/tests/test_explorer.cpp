#include <catch2/catch_amalgamated.hpp>

#include "softreal/explorer.hpp"

using namespace softreal;

namespace {

SweepSpec loa_p4_spec() {
    SweepSpec s;
    s.family = BlockFamily::Loa;
    s.wl = 4;
    s.ranges = {{"lpl", 0, 4}};
    s.metrics = {"mae", "mse", "max_abs", "area", "delay", "adp"};
    s.seed = 1;
    return s;
}

} // namespace

TEST_CASE("loa sweep produces one row per parameter value") {
    auto rows = sweep(loa_p4_spec());
    REQUIRE(rows.size() == 5);
    CHECK(rows[0].params[0] == std::pair<std::string, int>{"lpl", 0});
    CHECK(rows[0].value_of("mae") == 0.0);
    CHECK(rows[0].exhaustive);
    // frozen by the exhaustive oracle
    CHECK(rows[2].value_of("mae") == 0.625);
    CHECK(rows[4].value_of("mae") == 3.75);
    // area strictly decreasing in lpl
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].value_of("area") < rows[i - 1].value_of("area"));
}

TEST_CASE("sweep row count is the product of range sizes and order is stable") {
    SweepSpec s;
    s.family = BlockFamily::Bam;
    s.wl = 6;
    s.ranges = {{"hbl", 0, 2}, {"vbl", 0, 6}};
    s.metrics = {"area"};
    auto rows = sweep(s, 2);
    REQUIRE(rows.size() == 21);
    // lexicographic: hbl-major, vbl-minor
    CHECK(rows[0].params == std::vector<std::pair<std::string, int>>{{"hbl", 0}, {"vbl", 0}});
    CHECK(rows[7].params == std::vector<std::pair<std::string, int>>{{"hbl", 1}, {"vbl", 0}});

    // area strictly decreases along each +1 step that omits a cell
    auto cells = [&](int hbl, int vbl) {
        int n = 0;
        for (int j = 0; j < 6; ++j)
            for (int i = 0; i < 6; ++i)
                if (j >= hbl && i + j >= vbl) ++n;
        return n;
    };
    for (const auto& row : rows) {
        const int hbl = row.params[0].second, vbl = row.params[1].second;
        if (vbl < 6 && cells(hbl, vbl + 1) < cells(hbl, vbl)) {
            const auto& next = rows[static_cast<std::size_t>(hbl) * 7 + vbl + 1];
            CHECK(next.value_of("area") < row.value_of("area"));
        }
    }

    // rerun with a different worker count: identical rows
    auto again = sweep(s, 4);
    CHECK(again == rows);
}

TEST_CASE("pareto front on hand rows") {
    auto mk = [](double mae, double area) {
        SweepRow r;
        r.values = {{"mae", mae}, {"area", area}};
        return r;
    };
    std::vector<SweepRow> rows = {mk(1, 2), mk(2, 1), mk(2, 2)};
    auto front = pareto_front(rows, {{"mae", Direction::Min}, {"area", Direction::Min}});
    REQUIRE(front.size() == 2);
    CHECK(front[0] == rows[0]);
    CHECK(front[1] == rows[1]);

    // single row is its own front
    auto one = pareto_front({mk(3, 3)}, {{"mae", Direction::Min}});
    CHECK(one.size() == 1);

    CHECK_THROWS_AS(pareto_front(rows, {{"delay", Direction::Min}}), std::invalid_argument);
}

TEST_CASE("pareto front equals the brute-force dominance check on random rows") {
    CounterStream s(99, 1);
    std::vector<SweepRow> rows;
    for (int i = 0; i < 1000; ++i) {
        SweepRow r;
        r.values = {{"x", static_cast<double>(s.below(2 * i, 64))},
                    {"y", static_cast<double>(s.below(2 * i + 1, 64))}};
        rows.push_back(std::move(r));
    }
    const std::vector<Objective> obj = {{"x", Direction::Min}, {"y", Direction::Max}};
    auto front = pareto_front(rows, obj);

    // independent O(n^2) reference straight from the definition
    std::vector<SweepRow> ref;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < rows.size() && !dominated; ++j) {
            if (i == j) continue;
            const double xi = rows[i].value_of("x"), yi = rows[i].value_of("y");
            const double xj = rows[j].value_of("x"), yj = rows[j].value_of("y");
            dominated = xj <= xi && yj >= yi && (xj < xi || yj > yi);
        }
        if (!dominated) ref.push_back(rows[i]);
    }
    CHECK(front == ref);

    // the front is mutually non-dominating and every excluded row is dominated
    for (const auto& a : front)
        for (const auto& b : front)
            if (!(a == b)) {
                const bool adomb = a.value_of("x") <= b.value_of("x") &&
                                   a.value_of("y") >= b.value_of("y") &&
                                   (a.value_of("x") < b.value_of("x") ||
                                    a.value_of("y") > b.value_of("y"));
                CHECK_FALSE(adomb);
            }
}

TEST_CASE("render CSV and parse round trip") {
    auto rows = sweep(loa_p4_spec());
    const std::string csv = render(rows, RenderFormat::Csv);
    CHECK(csv.ends_with("\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6); // header + 5 rows

    auto parsed = parse_csv(csv, 1);
    CHECK(render(parsed, RenderFormat::Csv) == csv);

    const std::string md = render(rows, RenderFormat::Markdown);
    CHECK(md.starts_with("| lpl |"));

    // rendering distinct row lists gives distinct text
    auto other = rows;
    other[1].values[0].second += 0.25;
    CHECK(render(other, RenderFormat::Csv) != csv);
}

TEST_CASE("golden file: loa p=4 sweep") {
    auto rows = sweep(loa_p4_spec());
    const std::string csv = render(rows, RenderFormat::Csv);
    // areas by construction: lpl ORs + carry AND (when 0 < lpl < p) + 5(p-lpl)
    const std::string golden =
        "lpl,mae,mse,max_abs,area,delay,adp,exhaustive\n"
        "0,0,0,0,20,9,180,1\n"
        "1,0.25,0.25,1,17,7,119,1\n"
        "2,0.625,1,2,13,5,65,1\n"
        "3,1.375,4,4,9,3,27,1\n"
        "4,3.75,30,15,4,1,4,1\n";
    CHECK(csv == golden);
}

TEST_CASE("sweep with a fault config routes rows through the fault engine") {
    SweepSpec s;
    s.family = BlockFamily::Rrca;
    s.wl = 8;
    s.ranges = {{"aul", 0, 8}};
    s.metrics = {"mse", "area"};
    s.seed = 4;
    FaultConfig f;
    f.p_err = 1e-3;
    f.trials = 5000;
    f.voters_fault_free = true;
    s.fault = f;
    auto rows = sweep(s, 2);
    REQUIRE(rows.size() == 9);
    for (const auto& r : rows) CHECK_FALSE(r.exhaustive);
    CHECK(rows == sweep(s, 1));
    // area falls as protection shrinks
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].value_of("area") < rows[i - 1].value_of("area"));
}
