// Parameter sweeps across block families, joint accuracy/cost tabulation,
// Pareto filtering, and CSV/Markdown rendering.

#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "softreal/blocks.hpp"
#include "softreal/metrics.hpp"
#include "softreal/parallel.hpp"

namespace softreal {

struct ParamRange {
    std::string name;
    int lo = 0;
    int hi = 0; // inclusive
};

struct SweepSpec {
    BlockFamily family = BlockFamily::Loa;
    std::uint32_t wl = 8;
    std::vector<ParamRange> ranges;       // lexicographic sweep order as listed
    std::vector<std::string> metrics;     // of {mae,mse,aev,max_abs,area,delay,adp}
    InputDistribution stimulus;
    std::uint64_t samples = 100000;       // Monte-Carlo size over the exhaustive cap
    std::optional<FaultConfig> fault;
    std::uint64_t seed = 0;
};

struct SweepRow {
    std::vector<std::pair<std::string, int>> params;
    std::vector<std::pair<std::string, double>> values;
    bool exhaustive = false;

    bool operator==(const SweepRow&) const = default;

    double value_of(const std::string& name) const {
        for (const auto& [k, v] : values)
            if (k == name) return v;
        throw std::invalid_argument("unknown metric name: " + name);
    }
};

namespace detail {

inline bool is_error_metric(const std::string& m) {
    return m == "mae" || m == "mse" || m == "aev" || m == "max_abs";
}
inline bool is_cost_metric(const std::string& m) {
    return m == "area" || m == "delay" || m == "adp";
}

inline void apply_param(BlockSpec& spec, const std::string& name, int v) {
    if (v < 0) throw std::invalid_argument("negative parameter in sweep range");
    const auto u = static_cast<std::uint32_t>(v);
    if (name == "wl") spec.wl = u;
    else if (name == "lpl") spec.lpl = u;
    else if (name == "hbl") spec.hbl = u;
    else if (name == "vbl") spec.vbl = u;
    else if (name == "aul") spec.aul = u;
    else if (name == "hul") spec.hul = u;
    else if (name == "vul") spec.vul = u;
    else throw std::invalid_argument("unknown sweep parameter: " + name);
}

} // namespace detail

// One row per parameter combination in lexicographic order over the ranges.
// Error metrics run exhaustively when 2*wl fits the cap, else Monte-Carlo
// with a row-keyed substream of spec.seed; the "exhaustive" column records
// which engine produced each row.
inline std::vector<SweepRow> sweep(const SweepSpec& spec, int jobs = 1) {
    if (spec.metrics.empty()) throw std::invalid_argument("sweep needs at least one metric");
    for (const auto& m : spec.metrics)
        if (!detail::is_error_metric(m) && !detail::is_cost_metric(m))
            throw std::invalid_argument("unknown metric name: " + m);

    std::uint64_t total = 1;
    for (const auto& r : spec.ranges) {
        if (r.hi < r.lo) throw std::invalid_argument("empty sweep range: " + r.name);
        total *= static_cast<std::uint64_t>(r.hi - r.lo + 1);
    }

    bool want_error = false;
    for (const auto& m : spec.metrics) want_error |= detail::is_error_metric(m);

    std::vector<SweepRow> rows(total);
    parallel_chunks(total, jobs, [&](int, std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            SweepRow row;
            BlockSpec bs;
            bs.family = spec.family;
            bs.wl = spec.wl;
            std::uint64_t rem = idx;
            std::uint64_t div = total;
            for (const auto& r : spec.ranges) {
                const std::uint64_t span = static_cast<std::uint64_t>(r.hi - r.lo + 1);
                div /= span;
                const int v = r.lo + static_cast<int>(rem / div);
                rem %= div;
                detail::apply_param(bs, r.name, v);
                row.params.emplace_back(r.name, v);
            }
            validate_spec(bs);
            const Netlist nl = build_block(bs);

            ErrorReport er;
            if (want_error) {
                auto oracle = [&bs](std::uint64_t a, std::uint64_t b) {
                    return exact_value(bs, a, b);
                };
                if (spec.fault && spec.fault->p_err > 0) {
                    FaultConfig fc = *spec.fault;
                    fc.base_seed = hash_mix(spec.seed, idx);
                    er = fault_error(nl, fc, spec.stimulus, oracle);
                } else if (2 * bs.operand_width() <= kExhaustiveBitCap) {
                    er = exhaustive_error(nl, oracle, bs.operand_width());
                } else {
                    er = monte_carlo_error(nl, oracle, spec.stimulus, bs.operand_width(),
                                           spec.samples, hash_mix(spec.seed, idx));
                }
            }
            const CostReport cr = cost(nl);
            for (const auto& m : spec.metrics) {
                double v = 0;
                if (m == "mae") v = er.mae;
                else if (m == "mse") v = er.mse;
                else if (m == "aev") v = er.aev;
                else if (m == "max_abs") v = static_cast<double>(er.max_abs);
                else if (m == "area") v = cr.area;
                else if (m == "delay") v = cr.delay;
                else v = cr.adp;
                row.values.emplace_back(m, v);
            }
            row.exhaustive = !want_error || er.exhaustive;
            rows[idx] = std::move(row);
        }
    });
    return rows;
}

enum class Direction { Min, Max };

struct Objective {
    std::string metric;
    Direction dir = Direction::Min;
};

// Exactly the non-dominated rows, in their original (stable) order. Row A
// dominates B iff A is no worse on every objective and strictly better on at
// least one.
inline std::vector<SweepRow> pareto_front(const std::vector<SweepRow>& rows,
                                          const std::vector<Objective>& objectives) {
    if (objectives.empty()) throw std::invalid_argument("pareto_front needs objectives");
    const std::size_t n = rows.size();
    std::vector<std::vector<double>> keys(n, std::vector<double>(objectives.size()));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < objectives.size(); ++k) {
            const double v = rows[i].value_of(objectives[k].metric);
            keys[i][k] = objectives[k].dir == Direction::Min ? v : -v;
        }
    auto dominates = [&](std::size_t a, std::size_t b) {
        bool strict = false;
        for (std::size_t k = 0; k < keys[a].size(); ++k) {
            if (keys[a][k] > keys[b][k]) return false;
            if (keys[a][k] < keys[b][k]) strict = true;
        }
        return strict;
    };
    std::vector<SweepRow> front;
    for (std::size_t i = 0; i < n; ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < n && !dominated; ++j)
            if (j != i && dominates(j, i)) dominated = true;
        if (!dominated) front.push_back(rows[i]);
    }
    return front;
}

enum class RenderFormat { Csv, Markdown };

namespace detail {

// integers exact, reals 4 significant digits
inline std::string fmt_cell(double v) {
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", v);
        return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace detail

inline std::string render(const std::vector<SweepRow>& rows, RenderFormat format) {
    if (rows.empty()) throw std::invalid_argument("render needs at least one row");
    std::vector<std::string> header;
    for (const auto& [k, _] : rows.front().params) header.push_back(k);
    for (const auto& [k, _] : rows.front().values) header.push_back(k);
    header.push_back("exhaustive");

    std::string out;
    if (format == RenderFormat::Csv) {
        for (std::size_t i = 0; i < header.size(); ++i)
            out += (i ? "," : "") + header[i];
        out += "\n";
        for (const auto& r : rows) {
            std::string line;
            for (const auto& [_, v] : r.params) line += std::to_string(v) + ",";
            for (const auto& [_, v] : r.values) line += detail::fmt_cell(v) + ",";
            line += r.exhaustive ? "1" : "0";
            out += line + "\n";
        }
    } else {
        out += "|";
        for (const auto& h : header) out += " " + h + " |";
        out += "\n|";
        for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
        out += "\n";
        for (const auto& r : rows) {
            out += "|";
            for (const auto& [_, v] : r.params) out += " " + std::to_string(v) + " |";
            for (const auto& [_, v] : r.values) out += " " + detail::fmt_cell(v) + " |";
            out += r.exhaustive ? " 1 |" : " 0 |";
            out += "\n";
        }
    }
    return out;
}

// Inverse of render(Csv) up to numeric formatting: re-rendering the parsed
// rows reproduces the CSV text byte for byte.
inline std::vector<SweepRow> parse_csv(const std::string& text,
                                       std::size_t param_columns) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header.push_back(cell);
    }
    if (header.empty() || header.back() != "exhaustive")
        throw std::invalid_argument("not a sweep CSV: missing exhaustive column");
    if (param_columns + 1 > header.size())
        throw std::invalid_argument("param column count exceeds the header");

    std::vector<SweepRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string cell;
        SweepRow row;
        std::size_t col = 0;
        while (std::getline(ls, cell, ',')) {
            if (col < param_columns)
                row.params.emplace_back(header[col], std::stoi(cell));
            else if (col + 1 < header.size())
                row.values.emplace_back(header[col], std::stod(cell));
            else
                row.exhaustive = cell == "1";
            ++col;
        }
        if (col != header.size()) throw std::invalid_argument("ragged CSV row");
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace softreal
