// Netlist interchange format:
//   {"inputs":[{"name","width"}],
//    "gates":[{"id","kind","in":[ids],"tag"?}],
//    "outputs":[{"name","bits":[ids]}]}
// ids are dense integers and gates appear in topological order.

#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "softreal/netlist.hpp"

namespace softreal {

inline nlohmann::ordered_json netlist_to_json(const Netlist& nl) {
    nlohmann::ordered_json j;
    j["inputs"] = nlohmann::ordered_json::array();
    for (const auto& b : nl.inputs)
        j["inputs"].push_back({{"name", b.name}, {"width", b.width}});
    j["gates"] = nlohmann::ordered_json::array();
    for (const auto& g : nl.gates) {
        nlohmann::ordered_json jg;
        jg["id"] = g.id;
        jg["kind"] = std::string(gate_kind_name(g.kind));
        auto in = nlohmann::ordered_json::array();
        const int fanin = gate_fanin(g.kind);
        if (fanin >= 1) in.push_back(g.in0);
        if (fanin >= 2) in.push_back(g.in1);
        jg["in"] = std::move(in);
        if (g.tag == NodeTag::Voter) jg["tag"] = "voter";
        else if (g.tag == NodeTag::Protected) jg["tag"] = "protected";
        j["gates"].push_back(std::move(jg));
    }
    j["outputs"] = nlohmann::ordered_json::array();
    for (const auto& ob : nl.outputs)
        j["outputs"].push_back({{"name", ob.name}, {"bits", ob.bits}});
    return j;
}

inline std::string netlist_to_json_text(const Netlist& nl) {
    return netlist_to_json(nl).dump(2) + "\n";
}

// Parses and structurally validates; throws std::invalid_argument on
// malformed input, with the offending rule in the message.
inline Netlist netlist_from_json(const nlohmann::json& j) {
    Netlist nl;
    try {
        for (const auto& jb : j.at("inputs"))
            nl.inputs.push_back({jb.at("name").get<std::string>(), jb.at("width").get<std::uint32_t>()});
        for (const auto& jg : j.at("gates")) {
            Gate g;
            g.id = jg.at("id").get<NodeId>();
            const auto kind_name = jg.at("kind").get<std::string>();
            auto kind = gate_kind_from_name(kind_name);
            if (!kind) throw std::invalid_argument("unknown gate kind: " + kind_name);
            g.kind = *kind;
            const auto& in = jg.at("in");
            const int fanin = gate_fanin(g.kind);
            if (static_cast<int>(in.size()) != fanin)
                throw std::invalid_argument("gate fanin mismatch for " + kind_name);
            if (fanin >= 1) g.in0 = in[0].get<NodeId>();
            if (fanin >= 2) g.in1 = in[1].get<NodeId>();
            if (jg.contains("tag")) {
                const auto tag = jg.at("tag").get<std::string>();
                if (tag == "voter") g.tag = NodeTag::Voter;
                else if (tag == "protected") g.tag = NodeTag::Protected;
                else throw std::invalid_argument("unknown node tag: " + tag);
            }
            nl.gates.push_back(g);
        }
        for (const auto& jo : j.at("outputs"))
            nl.outputs.push_back({jo.at("name").get<std::string>(),
                                  jo.at("bits").get<std::vector<NodeId>>()});
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed netlist JSON: ") + e.what());
    }
    auto violations = validate(nl);
    if (!violations.empty())
        throw std::invalid_argument("invalid netlist: " + violations.front().rule +
                                    " (node " + std::to_string(violations.front().node) + ")");
    return nl;
}

inline Netlist netlist_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed netlist JSON: ") + e.what());
    }
    return netlist_from_json(j);
}

} // namespace softreal
