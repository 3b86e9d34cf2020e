// JSON bindings for block specs, fault configs and sweep specs as accepted
// by the CLI: {"block":"loa","wl":8,"lpl":3} etc.

#pragma once

#include <json.hpp>

#include "softreal/blocks.hpp"
#include "softreal/explorer.hpp"
#include "softreal/netlist.hpp"

namespace softreal {

inline nlohmann::ordered_json block_spec_to_json(const BlockSpec& s) {
    nlohmann::ordered_json j;
    j["block"] = std::string(block_family_name(s.family));
    j["wl"] = s.wl;
    switch (s.family) {
        case BlockFamily::Loa:
            j["lpl"] = s.lpl;
            if (!s.loa_carry_and) j["carry_and"] = false;
            break;
        case BlockFamily::Bam:
            j["hbl"] = s.hbl;
            j["vbl"] = s.vbl;
            break;
        case BlockFamily::Rrca: j["aul"] = s.aul; break;
        case BlockFamily::Ram:
            j["hul"] = s.hul;
            j["vul"] = s.vul;
            break;
        case BlockFamily::RftAdder: {
            auto secs = nlohmann::ordered_json::array();
            for (const auto& sec : s.sections)
                secs.push_back({{"width", sec.width},
                                {"protection", sec.prot == Protection::Tmr ? "tmr" : "unprotected"}});
            j["sections"] = std::move(secs);
            break;
        }
        default: break;
    }
    return j;
}

inline BlockSpec block_spec_from_json(const nlohmann::json& j) {
    BlockSpec s;
    const auto name = j.at("block").get<std::string>();
    const auto family = block_family_from_name(name);
    if (!family) throw std::invalid_argument("unknown block family: " + name);
    s.family = *family;
    s.wl = j.value("wl", 8u);
    s.lpl = j.value("lpl", 0u);
    s.hbl = j.value("hbl", 0u);
    s.vbl = j.value("vbl", 0u);
    s.aul = j.value("aul", 0u);
    s.hul = j.value("hul", 0u);
    s.vul = j.value("vul", 0u);
    s.loa_carry_and = j.value("carry_and", true);
    if (j.contains("sections")) {
        for (const auto& js : j.at("sections")) {
            Section sec;
            sec.width = js.at("width").get<std::uint32_t>();
            const auto p = js.at("protection").get<std::string>();
            if (p == "tmr") sec.prot = Protection::Tmr;
            else if (p == "unprotected") sec.prot = Protection::Unprotected;
            else throw std::invalid_argument("unknown protection: " + p);
            s.sections.push_back(sec);
        }
        if (s.family == BlockFamily::RftAdder && !j.contains("wl")) {
            s.wl = 0;
            for (const auto& sec : s.sections) s.wl += sec.width;
        }
    }
    validate_spec(s);
    return s;
}

inline FaultConfig fault_config_from_json(const nlohmann::json& j) {
    FaultConfig f;
    f.p_err = j.value("p_err", 0.0);
    f.trials = j.value("trials", std::uint64_t{1});
    f.base_seed = j.value("seed", std::uint64_t{0});
    f.voters_fault_free = j.value("voters_fault_free", false);
    f.check();
    return f;
}

// {"block":"bam","wl":6,"ranges":[{"name":"hbl","lo":0,"hi":2},...],
//  "metrics":["mae","area"],"seed":1,"samples":100000,"fault":{...}}
inline SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
    SweepSpec s;
    const auto name = j.at("block").get<std::string>();
    const auto family = block_family_from_name(name);
    if (!family) throw std::invalid_argument("unknown block family: " + name);
    s.family = *family;
    s.wl = j.value("wl", 8u);
    for (const auto& jr : j.at("ranges"))
        s.ranges.push_back({jr.at("name").get<std::string>(), jr.at("lo").get<int>(),
                            jr.at("hi").get<int>()});
    s.metrics = j.at("metrics").get<std::vector<std::string>>();
    s.samples = j.value("samples", std::uint64_t{100000});
    s.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("fault")) s.fault = fault_config_from_json(j.at("fault"));
    return s;
}

} // namespace softreal
