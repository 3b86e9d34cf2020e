// Command-line frontend. Machine-first: tabular results go to the output
// stream as CSV, diagnostics to the error stream. Exit codes: 0 success,
// 1 domain error (bad parameters or inputs), 2 usage error.

#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "softreal/arith.hpp"
#include "softreal/blocks.hpp"
#include "softreal/config_json.hpp"
#include "softreal/explorer.hpp"
#include "softreal/metrics.hpp"
#include "softreal/mlp.hpp"
#include "softreal/netlist_json.hpp"
#include "softreal/wpa.hpp"

namespace softreal::cli {

namespace detail {

struct BlockArgs {
    std::string block = "rca";
    std::uint32_t wl = 8;
    std::uint32_t lpl = 0, hbl = 0, vbl = 0, aul = 0, hul = 0, vul = 0;
    bool no_carry_and = false;
    std::string sections; // e.g. "3u,5t"

    BlockSpec to_spec() const {
        BlockSpec s;
        const auto family = block_family_from_name(block);
        if (!family) throw std::invalid_argument("unknown block family: " + block);
        s.family = *family;
        s.wl = wl;
        s.lpl = lpl;
        s.hbl = hbl;
        s.vbl = vbl;
        s.aul = aul;
        s.hul = hul;
        s.vul = vul;
        s.loa_carry_and = !no_carry_and;
        if (!sections.empty()) {
            std::istringstream in(sections);
            std::string tok;
            std::uint32_t total = 0;
            while (std::getline(in, tok, ',')) {
                if (tok.size() < 2) throw std::invalid_argument("bad section token: " + tok);
                const char p = tok.back();
                Section sec;
                sec.width = static_cast<std::uint32_t>(std::stoul(tok.substr(0, tok.size() - 1)));
                if (p == 'u') sec.prot = Protection::Unprotected;
                else if (p == 't') sec.prot = Protection::Tmr;
                else throw std::invalid_argument("section protection must be 'u' or 't'");
                s.sections.push_back(sec);
                total += sec.width;
            }
            if (s.family == BlockFamily::RftAdder) s.wl = total;
        }
        validate_spec(s);
        return s;
    }

    std::string params_string() const {
        std::string p = "wl=" + std::to_string(wl);
        const auto add = [&](const char* k, std::uint32_t v) {
            p += ";" + std::string(k) + "=" + std::to_string(v);
        };
        if (block == "loa") add("lpl", lpl);
        if (block == "bam") {
            add("hbl", hbl);
            add("vbl", vbl);
        }
        if (block == "rrca") add("aul", aul);
        if (block == "ram") {
            add("hul", hul);
            add("vul", vul);
        }
        if (block == "rft_adder") p += ";sections=" + sections;
        return p;
    }
};

inline void add_block_options(CLI::App* cmd, BlockArgs& a) {
    cmd->add_option("--block", a.block, "block family: rca|array_mult|loa|bam|rrca|ram|rft_adder")
        ->required();
    cmd->add_option("--wl", a.wl, "operand word length in bits");
    cmd->add_option("--lpl", a.lpl, "LOA lower-part length");
    cmd->add_option("--hbl", a.hbl, "BAM horizontal break level");
    cmd->add_option("--vbl", a.vbl, "BAM vertical break level");
    cmd->add_option("--aul", a.aul, "RRCA adder unprotected length");
    cmd->add_option("--hul", a.hul, "RAM horizontal unprotected length");
    cmd->add_option("--vul", a.vul, "RAM vertical unprotected length");
    cmd->add_flag("--no-carry-and", a.no_carry_and, "drop the LOA carry-in AND gate");
    cmd->add_option("--sections", a.sections,
                    "RFT adder sections, least significant first, e.g. 3u,5t");
}

struct ArithArgs {
    std::string adder = "rca";
    std::uint32_t lpl = 0, aul = 0;
    std::string adder_sections;
    std::string mult = "array_mult";
    std::uint32_t hbl = 0, vbl = 0, hul = 0, vul = 0;
    double perr = 0.0;
    std::uint64_t fault_seed = 0;
    bool voters_fault_free = false;
    bool plain_only = false;

    ArithConfig to_config() const {
        ArithConfig c;
        const auto af = block_family_from_name(adder);
        if (!af || (*af != BlockFamily::Rca && *af != BlockFamily::Loa &&
                    *af != BlockFamily::Rrca && *af != BlockFamily::RftAdder))
            throw std::invalid_argument("adder must be rca|loa|rrca|rft_adder");
        c.adder.family = *af;
        c.adder.lpl = lpl;
        c.adder.aul = aul;
        const auto mf = block_family_from_name(mult);
        if (!mf || (*mf != BlockFamily::ArrayMult && *mf != BlockFamily::Bam &&
                    *mf != BlockFamily::Ram))
            throw std::invalid_argument("multiplier must be array_mult|bam|ram");
        c.multiplier.family = *mf;
        c.multiplier.hbl = hbl;
        c.multiplier.vbl = vbl;
        c.multiplier.hul = hul;
        c.multiplier.vul = vul;
        if (perr > 0) {
            FaultConfig f;
            f.p_err = perr;
            f.trials = ~std::uint64_t{0};
            f.base_seed = fault_seed;
            f.voters_fault_free = voters_fault_free;
            f.check();
            c.fault = f;
        }
        c.fault_plain_only = plain_only;
        return c;
    }

    std::string params_string() const {
        std::string p = "adder=" + adder;
        if (adder == "loa") p += ";lpl=" + std::to_string(lpl);
        if (adder == "rrca") p += ";aul=" + std::to_string(aul);
        p += ";mult=" + mult;
        if (mult == "bam") p += ";hbl=" + std::to_string(hbl) + ";vbl=" + std::to_string(vbl);
        if (mult == "ram") p += ";hul=" + std::to_string(hul) + ";vul=" + std::to_string(vul);
        if (perr > 0) {
            std::ostringstream os;
            os << ";perr=" << perr << ";fault_seed=" << fault_seed;
            if (voters_fault_free) os << ";voters_fault_free=1";
            if (plain_only) os << ";plain_only=1";
            p += os.str();
        }
        return p;
    }
};

inline void add_arith_options(CLI::App* cmd, ArithArgs& a) {
    cmd->add_option("--adder", a.adder, "adder family: rca|loa|rrca|rft_adder");
    cmd->add_option("--lpl", a.lpl, "LOA lower-part length (format-scale bits)");
    cmd->add_option("--aul", a.aul, "RRCA unprotected length (format-scale bits)");
    cmd->add_option("--mult", a.mult, "multiplier family: array_mult|bam|ram");
    cmd->add_option("--hbl", a.hbl, "BAM horizontal break level");
    cmd->add_option("--vbl", a.vbl, "BAM vertical break level");
    cmd->add_option("--hul", a.hul, "RAM horizontal unprotected length");
    cmd->add_option("--vul", a.vul, "RAM vertical unprotected length");
    cmd->add_option("--perr", a.perr, "per-node flip probability per evaluation");
    cmd->add_option("--fault-seed", a.fault_seed, "fault stream base seed");
    cmd->add_flag("--voters-fault-free", a.voters_fault_free, "exempt voter gates from flips");
    cmd->add_flag("--plain-only", a.plain_only, "restrict flips to fault-probable nodes");
}

inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << text;
}

inline std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open input file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::string pct_1dp(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

} // namespace detail

// Runs one CLI invocation; argv excludes the program name.
inline int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"gate-level soft-arithmetic workbench"};
    app.require_subcommand(1);

    // --- build ---------------------------------------------------------
    auto* build = app.add_subcommand("build", "generate a block netlist as JSON");
    detail::BlockArgs build_args;
    detail::add_block_options(build, build_args);
    std::string build_out, build_spec;
    build->add_option("--out", build_out, "output file (default stdout)");
    build->add_option("--spec", build_spec, "block spec JSON file instead of flags");
    build->get_option("--block")->required(false);

    // --- eval ----------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a netlist on one input assignment");
    std::string eval_file, eval_inputs;
    eval_cmd->add_option("--netlist", eval_file, "netlist JSON file")->required();
    eval_cmd->add_option("--inputs", eval_inputs, "comma list, e.g. a=9,b=6")->required();

    // --- error ---------------------------------------------------------
    auto* error_cmd = app.add_subcommand("error", "error statistics of a block vs the exact op");
    detail::BlockArgs err_args;
    detail::add_block_options(error_cmd, err_args);
    std::string err_mode = "exhaustive";
    std::uint64_t err_samples = 100000, err_seed = 0;
    int err_jobs = 0;
    error_cmd->add_option("--mode", err_mode, "exhaustive|mc");
    error_cmd->add_option("--samples", err_samples, "Monte-Carlo sample count");
    error_cmd->add_option("--seed", err_seed, "stimulus seed");
    error_cmd->add_option("--jobs", err_jobs, "worker count (default SOFTREAL_JOBS or 1)");

    // --- faultsim ------------------------------------------------------
    auto* fault_cmd = app.add_subcommand("faultsim", "Monte-Carlo soft-error study of a block");
    detail::BlockArgs fs_args;
    detail::add_block_options(fault_cmd, fs_args);
    double fs_perr = 1e-5;
    std::uint64_t fs_trials = 100000, fs_seed = 0;
    bool fs_voters_ff = false;
    std::string fs_region = "all";
    int fs_jobs = 0;
    fault_cmd->add_option("--perr", fs_perr, "per-node flip probability");
    fault_cmd->add_option("--trials", fs_trials, "trial count");
    fault_cmd->add_option("--seed", fs_seed, "base seed");
    fault_cmd->add_flag("--voters-fault-free", fs_voters_ff, "exempt voter gates");
    fault_cmd->add_option("--region", fs_region, "fault region: all|unprotected");
    fault_cmd->add_option("--jobs", fs_jobs, "worker count");

    // --- sweep ---------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep from a JSON spec");
    std::string sweep_file, sweep_fmt = "csv", sweep_pareto, sweep_out;
    int sweep_jobs = 0;
    sweep_cmd->add_option("--spec", sweep_file, "sweep spec JSON file")->required();
    sweep_cmd->add_option("--format", sweep_fmt, "csv|markdown");
    sweep_cmd->add_option("--pareto", sweep_pareto,
                          "keep only the Pareto front, e.g. mae:min,area:min");
    sweep_cmd->add_option("--out", sweep_out, "output file (default stdout)");
    sweep_cmd->add_option("--jobs", sweep_jobs, "worker count");

    // --- app-mlp -------------------------------------------------------
    auto* mlp_cmd = app.add_subcommand("app-mlp", "train/evaluate the fixed-point MLP harness");
    detail::ArithArgs mlp_arith;
    detail::add_arith_options(mlp_cmd, mlp_arith);
    std::string mlp_topology = "64,8,4";
    std::uint32_t mlp_wl = 9, mlp_frac = 9, mlp_dims = 64, mlp_classes = 4, mlp_per_class = 16;
    std::uint32_t mlp_epochs = 120;
    double mlp_lr = 1.5, mlp_target = 0.01, mlp_spread = 0.06;
    std::uint64_t mlp_seed = 1, mlp_data_seed = 1;
    mlp_cmd->add_option("--topology", mlp_topology, "layer sizes, e.g. 64,8,4");
    mlp_cmd->add_option("--wl", mlp_wl, "fixed-point word length");
    mlp_cmd->add_option("--frac", mlp_frac, "fixed-point fraction bits");
    mlp_cmd->add_option("--dims", mlp_dims, "blob feature dimensions");
    mlp_cmd->add_option("--classes", mlp_classes, "blob class count");
    mlp_cmd->add_option("--per-class", mlp_per_class, "samples per class");
    mlp_cmd->add_option("--data-seed", mlp_data_seed, "dataset seed");
    mlp_cmd->add_option("--epochs", mlp_epochs, "max training epochs");
    mlp_cmd->add_option("--lr", mlp_lr, "learning rate");
    mlp_cmd->add_option("--target-mse", mlp_target, "stop when the epoch mse reaches this");
    mlp_cmd->add_option("--spread", mlp_spread, "blob spread");
    mlp_cmd->add_option("--seed", mlp_seed, "training seed");
    std::string mlp_config, mlp_dataset;
    mlp_cmd->add_option("--config", mlp_config,
                        "JSON config file; keys topology/wl/frac/epochs/lr/target_mse/seed "
                        "override the flags");
    mlp_cmd->add_option("--dataset", mlp_dataset,
                        "JSON dataset file {\"x\":[[...]],\"label\":[...],\"classes\":n} "
                        "instead of synthetic blobs");

    // --- app-defuzz ----------------------------------------------------
    auto* wpa_cmd = app.add_subcommand("app-defuzz", "WPA defuzzifier harness");
    detail::ArithArgs wpa_arith;
    detail::add_arith_options(wpa_cmd, wpa_arith);
    std::uint32_t wpa_wl = 6;
    std::string wpa_plateaus, wpa_plateaus_file;
    std::uint64_t wpa_samples = 0, wpa_seed = 0;
    int wpa_jobs = 0;
    wpa_cmd->add_option("--wl", wpa_wl, "fuzzy word length (universe 2^wl)");
    wpa_cmd->add_option("--plateaus", wpa_plateaus, "left:right:height list, e.g. 0:3:1,8:11:3");
    wpa_cmd->add_option("--plateaus-file", wpa_plateaus_file,
                        "JSON file with a list of [left,right,height] triples");
    wpa_cmd->add_option("--samples", wpa_samples, "error-study sample count");
    wpa_cmd->add_option("--seed", wpa_seed, "stimulus seed");
    wpa_cmd->add_option("--jobs", wpa_jobs, "worker count");

    // --- improve -------------------------------------------------------
    auto* imp_cmd = app.add_subcommand("improve", "improvement percentages, reference vs candidate");
    std::vector<double> imp_ref, imp_cand;
    imp_cmd->add_option("--reference", imp_ref, "reference value(s): scalar or area,delay[,adp]")
        ->required();
    imp_cmd->add_option("--candidate", imp_cand, "candidate value(s)")->required();

    // parse
    std::vector<const char*> cargs;
    cargs.push_back("softreal");
    for (const auto& a : argv) cargs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*build) {
            BlockSpec spec;
            if (!build_spec.empty()) {
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(detail::read_text(build_spec));
                } catch (const nlohmann::json::exception& e) {
                    throw std::invalid_argument(std::string("malformed block spec: ") + e.what());
                }
                spec = block_spec_from_json(j);
            } else {
                spec = build_args.to_spec();
            }
            if (build_spec.empty() && build->get_option("--block")->count() == 0)
                throw std::invalid_argument("build needs --block or --spec");
            const Netlist nl = build_block(spec);
            detail::write_text(build_out, netlist_to_json_text(nl), out);
        } else if (*eval_cmd) {
            const Netlist nl = netlist_from_json_text(detail::read_text(eval_file));
            std::vector<std::uint64_t> values(nl.inputs.size(), 0);
            std::vector<bool> seen(nl.inputs.size(), false);
            std::istringstream in(eval_inputs);
            std::string tok;
            while (std::getline(in, tok, ',')) {
                const auto eq = tok.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("inputs must be name=value pairs");
                const auto name = tok.substr(0, eq);
                const auto bus = nl.find_input(name);
                if (!bus) throw std::invalid_argument("unknown input bus: " + name);
                values[*bus] = std::stoull(tok.substr(eq + 1));
                seen[*bus] = true;
            }
            for (std::size_t b = 0; b < nl.inputs.size(); ++b)
                if (!seen[b])
                    throw std::invalid_argument("missing value for input bus: " + nl.inputs[b].name);
            const auto outs = evaluate(nl, values);
            for (std::size_t o = 0; o < outs.size(); ++o)
                out << nl.outputs[o].name << "=" << outs[o] << "\n";
        } else if (*error_cmd) {
            const BlockSpec spec = err_args.to_spec();
            const Netlist nl = build_block(spec);
            auto oracle = [&spec](std::uint64_t a, std::uint64_t b) {
                return exact_value(spec, a, b);
            };
            ErrorReport r;
            if (err_mode == "exhaustive") {
                r = exhaustive_error(nl, oracle, spec.operand_width());
            } else if (err_mode == "mc") {
                r = monte_carlo_error(nl, oracle, InputDistribution::uniform(),
                                      spec.operand_width(), err_samples, err_seed, err_jobs);
            } else {
                throw std::invalid_argument("mode must be exhaustive or mc");
            }
            out << report_csv_header() << "\n"
                << report_csv_row(err_args.block, err_args.params_string(), r, err_seed) << "\n";
        } else if (*fault_cmd) {
            const BlockSpec spec = fs_args.to_spec();
            const Netlist nl = build_block(spec);
            FaultConfig cfg;
            cfg.p_err = fs_perr;
            cfg.trials = fs_trials;
            cfg.base_seed = fs_seed;
            cfg.voters_fault_free = fs_voters_ff;
            if (fs_region == "unprotected")
                cfg.fault_region = nodes_with_tag(nl, NodeTag::Plain);
            else if (fs_region != "all")
                throw std::invalid_argument("region must be all or unprotected");
            auto oracle = [&spec](std::uint64_t a, std::uint64_t b) {
                return exact_value(spec, a, b);
            };
            const ErrorReport r = fault_error(nl, cfg, InputDistribution::uniform(), oracle,
                                              fs_jobs);
            std::ostringstream params;
            params << fs_args.params_string() << ";perr=" << fs_perr << ";trials=" << fs_trials
                   << ";region=" << fs_region << ";voters_fault_free=" << (fs_voters_ff ? 1 : 0);
            out << report_csv_header() << "\n"
                << report_csv_row(fs_args.block, params.str(), r, fs_seed) << "\n";
        } else if (*sweep_cmd) {
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(detail::read_text(sweep_file));
            } catch (const nlohmann::json::exception& e) {
                throw std::invalid_argument(std::string("malformed sweep spec: ") + e.what());
            }
            const SweepSpec spec = sweep_spec_from_json(j);
            auto rows = sweep(spec, sweep_jobs);
            if (!sweep_pareto.empty()) {
                std::vector<Objective> objectives;
                std::istringstream in(sweep_pareto);
                std::string tok;
                while (std::getline(in, tok, ',')) {
                    const auto c = tok.find(':');
                    Objective o;
                    o.metric = tok.substr(0, c);
                    if (c != std::string::npos) {
                        const auto dir = tok.substr(c + 1);
                        if (dir == "min") o.dir = Direction::Min;
                        else if (dir == "max") o.dir = Direction::Max;
                        else throw std::invalid_argument("pareto direction must be min or max");
                    }
                    objectives.push_back(std::move(o));
                }
                rows = pareto_front(rows, objectives);
            }
            const auto fmt = sweep_fmt == "markdown" ? RenderFormat::Markdown
                           : sweep_fmt == "csv"      ? RenderFormat::Csv
                                                     : throw std::invalid_argument(
                                                           "format must be csv or markdown");
            detail::write_text(sweep_out, render(rows, fmt), out);
        } else if (*mlp_cmd) {
            if (!mlp_config.empty()) {
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(detail::read_text(mlp_config));
                } catch (const nlohmann::json::exception& e) {
                    throw std::invalid_argument(std::string("malformed mlp config: ") + e.what());
                }
                if (j.contains("topology")) {
                    std::string t;
                    for (const auto& v : j.at("topology"))
                        t += (t.empty() ? "" : ",") + std::to_string(v.get<std::uint32_t>());
                    mlp_topology = t;
                }
                mlp_wl = j.value("wl", mlp_wl);
                mlp_frac = j.value("frac", mlp_frac);
                mlp_epochs = j.value("epochs", mlp_epochs);
                mlp_lr = j.value("lr", mlp_lr);
                mlp_target = j.value("target_mse", mlp_target);
                mlp_seed = j.value("seed", mlp_seed);
            }
            std::vector<std::uint32_t> topology;
            std::istringstream in(mlp_topology);
            std::string tok;
            while (std::getline(in, tok, ','))
                topology.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
            if (topology.size() < 2) throw std::invalid_argument("topology needs >= 2 layers");
            Dataset data;
            std::string data_tag;
            if (!mlp_dataset.empty()) {
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(detail::read_text(mlp_dataset));
                } catch (const nlohmann::json::exception& e) {
                    throw std::invalid_argument(std::string("malformed dataset: ") + e.what());
                }
                data.x = j.at("x").get<std::vector<std::vector<double>>>();
                data.label = j.at("label").get<std::vector<std::uint32_t>>();
                data.classes = j.at("classes").get<std::uint32_t>();
                if (data.x.size() != data.label.size())
                    throw std::invalid_argument("dataset x/label length mismatch");
                data_tag = "dataset=file";
            } else {
                if (topology.front() != mlp_dims)
                    throw std::invalid_argument("topology input size must equal --dims");
                if (topology.back() != mlp_classes)
                    throw std::invalid_argument("topology output size must equal --classes");
                data = make_blobs(mlp_per_class, mlp_dims, mlp_classes, mlp_data_seed, mlp_spread);
                data_tag = "data_seed=" + std::to_string(mlp_data_seed);
            }
            const FixedPointFormat fmt{mlp_wl, mlp_frac};
            TrainConfig tc;
            tc.lr = mlp_lr;
            tc.max_epochs = mlp_epochs;
            tc.target_mse = mlp_target;
            tc.seed = mlp_seed;
            const ArithConfig cfg = mlp_arith.to_config();
            auto res = mlp_train(data, topology, fmt, cfg, tc);
            std::ostringstream params;
            params << "topology=" << mlp_topology << ";wl=" << mlp_wl << ";frac=" << mlp_frac
                   << ";" << data_tag << ";" << mlp_arith.params_string();
            out << "app,params,te,final_mse,correct_pct,diverged,seed\n";
            out << "mlp," << params.str() << "," << res.report.epochs << ","
                << softreal::detail::fmt_double(res.report.final_mse) << "," << softreal::detail::fmt_double(res.report.correct_pct)
                << "," << (res.report.diverged ? 1 : 0) << "," << mlp_seed << "\n";
        } else if (*wpa_cmd) {
            const ArithConfig cfg = wpa_arith.to_config();
            if (!wpa_plateaus.empty() || !wpa_plateaus_file.empty()) {
                PlateauSet ps;
                if (!wpa_plateaus_file.empty()) {
                    nlohmann::json j;
                    try {
                        j = nlohmann::json::parse(detail::read_text(wpa_plateaus_file));
                    } catch (const nlohmann::json::exception& e) {
                        throw std::invalid_argument(std::string("malformed plateau file: ") +
                                                    e.what());
                    }
                    for (const auto& t : j) {
                        if (!t.is_array() || t.size() != 3)
                            throw std::invalid_argument(
                                "plateau file entries must be [left,right,height]");
                        ps.push_back({t[0].get<std::uint32_t>(), t[1].get<std::uint32_t>(),
                                      t[2].get<std::uint32_t>()});
                    }
                } else {
                    std::istringstream in(wpa_plateaus);
                    std::string tok;
                    while (std::getline(in, tok, ',')) {
                        Plateau p;
                        if (std::sscanf(tok.c_str(), "%u:%u:%u", &p.left, &p.right, &p.height) != 3)
                            throw std::invalid_argument("plateaus must be left:right:height");
                        ps.push_back(p);
                    }
                }
                out << wpa_defuzzify(ps, cfg, wpa_wl) << "\n";
            } else if (wpa_samples > 0) {
                const ErrorReport r = defuzz_error_study(cfg, wpa_wl, wpa_samples, wpa_seed,
                                                         wpa_jobs);
                std::ostringstream params;
                params << "wl=" << wpa_wl << ";" << wpa_arith.params_string();
                out << report_csv_header() << "\n"
                    << report_csv_row("wpa", params.str(), r, wpa_seed) << "\n";
            } else {
                throw std::invalid_argument("app-defuzz needs --plateaus, --plateaus-file or --samples");
            }
        } else if (*imp_cmd) {
            if (imp_ref.size() != imp_cand.size() || imp_ref.empty())
                throw std::invalid_argument("reference and candidate need matching arity");
            if (imp_ref.size() == 1) {
                out << "improvement_pct\n" << detail::pct_1dp(improvement_pct(imp_ref[0], imp_cand[0]))
                    << "\n";
            } else if (imp_ref.size() == 2 || imp_ref.size() == 3) {
                CostReport ref{imp_ref[0], imp_ref[1],
                               imp_ref.size() == 3 ? imp_ref[2] : imp_ref[0] * imp_ref[1]};
                CostReport cand{imp_cand[0], imp_cand[1],
                                imp_cand.size() == 3 ? imp_cand[2] : imp_cand[0] * imp_cand[1]};
                const auto imp = improvement(ref, cand);
                out << "area_pct,delay_pct,adp_pct\n"
                    << detail::pct_1dp(imp.area) << "," << detail::pct_1dp(imp.delay) << ","
                    << detail::pct_1dp(imp.adp) << "\n";
            } else {
                throw std::invalid_argument("improve takes 1-3 values per side");
            }
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace softreal::cli
