// svbench: subcircuit volumetric benchmarking toolkit CLI.
//
// Subcommands mirror the pipeline stages (lcu, transpile, snip, simulate,
// analyze, report) plus `bench` for the end-to-end run. Exit codes: 0 on
// success, 2 for configuration errors, 3 for stage failures.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "svb/analysis.hpp"
#include "svb/io.hpp"
#include "svb/lcu.hpp"
#include "svb/pipeline.hpp"
#include "svb/report.hpp"
#include "svb/sim.hpp"
#include "svb/snip.hpp"
#include "svb/transpile.hpp"

namespace fs = std::filesystem;
using namespace svb;

namespace {

std::vector<snip::Shape> parse_shapes_list(const std::string& text) {
    std::vector<snip::Shape> shapes;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        shapes.push_back(pipeline::parse_shape(text.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    if (shapes.empty()) throw ConfigError("no shapes given");
    return shapes;
}

int run_lcu(const std::string& terms_path, const std::string& select, const std::string& prepare,
            const std::string& out_path) {
    const auto terms = pipeline::load_terms(terms_path);
    const auto spec = lcu::plan_registers(terms, lcu::select_mode_from_string(select));
    lcu::AssembleOptions opts;
    opts.prepare = lcu::prepare_mode_from_string(prepare);
    const Circuit c = lcu::assemble_lcu(spec, opts);
    io::save_circuit(c, out_path);
    std::printf("lcu: %zu terms, n=%d, m=%d, aux=%d -> %s (width %d, depth %d)\n", spec.terms.size(),
                spec.n, spec.m, spec.aux_total, out_path.c_str(), c.width(), c.depth());
    return 0;
}

int run_transpile(const std::string& in_path, const std::string& device_path, std::uint64_t seed,
                  const std::string& out_path) {
    const Circuit c = io::load_circuit(in_path);
    const DeviceModel dev = io::load_device(device_path);
    const auto routed = transpile::transpile_circuit(c, dev, seed);
    io::save_circuit(routed.circuit, out_path);
    io::json layout;
    layout["schema"] = "svb.layout/1";
    io::json init = io::json::object(), fin = io::json::object();
    for (const auto& [cq, dq] : routed.initial_layout) init[cq] = dq;
    for (const auto& [cq, dq] : routed.final_permutation) fin[cq] = dq;
    layout["initial_layout"] = std::move(init);
    layout["final_permutation"] = std::move(fin);
    layout["inserted_swaps"] = routed.inserted_swaps;
    io::write_text(out_path + ".layout.json", layout.dump(2) + "\n");
    const auto shape = circuit_shape(routed.circuit);
    std::printf("transpile: %s -> %s (width %d, depth %d, quops %lld, swaps %d)\n", in_path.c_str(),
                out_path.c_str(), shape.width, shape.depth, shape.quops, routed.inserted_swaps);
    return 0;
}

int run_snip(const std::string& target_path, const std::string& device_path,
             const std::string& proto_path, const std::string& shapes_text, int k,
             std::uint64_t seed, const std::string& growth, const std::string& out_dir) {
    const Circuit target = io::load_circuit(target_path);
    const DeviceModel dev = io::load_device(device_path);
    const DeviceModel proto = proto_path.empty() ? dev : io::load_device(proto_path);
    const auto shapes = parse_shapes_list(shapes_text);
    const auto snippets = snip::sample_snippets(target, dev, proto, shapes, k, seed,
                                                snip::growth_rule_from_string(growth));
    pipeline::write_snippets(out_dir, snippets);
    std::printf("snip: %zu snippets (%zu shapes x K=%d) -> %s\n", snippets.size(), shapes.size(), k,
                out_dir.c_str());
    return 0;
}

int run_simulate(const std::string& snippets_dir, const std::string& circuit_path,
                 const std::string& device_path, const std::string& noise_path, std::uint64_t seed,
                 const sim::SimBudget& budget, const std::string& out_path) {
    const auto nm = sim::load_noise_model(noise_path);
    std::vector<snip::Snippet> snippets;
    if (!snippets_dir.empty()) {
        snippets = pipeline::read_snippets(snippets_dir);
    } else if (!circuit_path.empty()) {
        snip::Snippet s;
        s.circuit = io::load_circuit(circuit_path);
        s.shape = {s.circuit.width(), s.circuit.depth()};
        snippets.push_back(std::move(s));
    } else {
        throw ConfigError("simulate needs --snippets or --circuit");
    }
    DeviceModel dev;
    if (!device_path.empty()) {
        dev = io::load_device(device_path);
    } else {
        if (nm.gamma() != 0.0) throw ConfigError("--device is required when the model has crosstalk");
        // connectivity only matters for crosstalk; an edgeless device is fine here
        std::vector<std::string> labels;
        for (const auto& s : snippets) {
            for (const auto& q : s.circuit.qubits()) {
                if (std::find(labels.begin(), labels.end(), q) == labels.end()) labels.push_back(q);
            }
        }
        dev = DeviceModel(labels, {}, {});
    }
    const auto records = sim::run_snippet_batch(snippets, dev, nm, budget, seed);
    io::write_text(out_path, sim::records_to_jsonl(records));
    int failed = 0;
    for (const auto& r : records) failed += r.failed ? 1 : 0;
    std::printf("simulate: %zu records (%d failed) -> %s\n", records.size(), failed, out_path.c_str());
    return 0;
}

int run_analyze(const std::string& records_path, const std::string& target_shape_text,
                double threshold, const std::string& out_dir) {
    const auto records = sim::parse_records_jsonl(io::read_text(records_path));
    const auto target = pipeline::parse_shape(target_shape_text);
    const auto aggregates = analysis::aggregate_all(records, threshold);
    const auto eps_w = analysis::depth_average_table(aggregates);
    const auto summary = analysis::capability_summary(eps_w, target.w, target.d, true);
    fs::create_directories(out_dir);
    io::write_text((fs::path(out_dir) / "aggregates.json").string(),
                   report::aggregates_json_text(aggregates));
    io::write_text((fs::path(out_dir) / "summary.json").string(), report::summary_json_text(summary));
    std::printf("analyze: %zu aggregates, %zu widths -> %s\n", aggregates.size(), eps_w.size(),
                out_dir.c_str());
    return 0;
}

int run_report(const std::string& aggregates_path, const std::string& summary_path,
               const std::string& target_shape_text, const std::string& out_dir) {
    const auto aggregates = report::parse_aggregates_json(io::read_text(aggregates_path));
    const auto target = pipeline::parse_shape(target_shape_text);
    fs::create_directories(out_dir);
    report::emit_volumetric(aggregates, target, (fs::path(out_dir) / "volumetric.svg").string(),
                            (fs::path(out_dir) / "volumetric.csv").string());
    if (!summary_path.empty()) {
        io::json j;
        try {
            j = io::json::parse(io::read_text(summary_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(e.what(), e.byte);
        }
        analysis::CapabilitySummary s;
        s.q_t = j.value("q_t", 0ll);
        s.target_w = j.value("target_w", 0);
        s.target_d = j.value("target_d", 0);
        s.w_max = j.value("w_max", 0);
        auto opt = [&](const char* key) -> std::optional<double> {
            if (j.contains(key) && !j.at(key).is_null()) return j.at(key).get<double>();
            return std::nullopt;
        };
        s.eps2 = opt("eps2");
        s.eps_wmax = opt("eps_wmax");
        s.q0 = opt("q0");
        s.qc = opt("qc");
        s.f0_log10 = opt("f0_log10");
        s.f_log10 = opt("f_log10");
        s.f0_linear = opt("f0");
        s.f_linear = opt("f");
        s.scalability = opt("scalability");
        s.capability = opt("capability");
        report::emit_summary(s, (fs::path(out_dir) / "summary.csv").string(),
                             (fs::path(out_dir) / "summary.json").string());
    }
    std::printf("report: wrote volumetric + summary files to %s\n", out_dir.c_str());
    return 0;
}

int run_bench(const std::string& config_path, std::optional<std::uint64_t> seed_override,
              const std::string& out_dir) {
    auto cfg = pipeline::load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;
    const auto res = pipeline::run_pipeline(cfg, out_dir);
    std::printf("bench: target %dx%d, %d snippets, %d records, %d aggregates -> %s\n",
                res.target_shape.w, res.target_shape.d, res.n_snippets, res.n_records,
                res.n_aggregates, out_dir.c_str());
    if (res.summary.qc) {
        const std::string q0 = res.summary.q0 ? report::format_quops(*res.summary.q0) : "n/a";
        const std::string sc =
            res.summary.scalability ? report::format_percent(*res.summary.scalability) : "n/a";
        const std::string cp =
            res.summary.capability ? report::format_percent(*res.summary.capability) : "n/a";
        std::printf("bench: Q_T=%s Q_0=%s Q_C=%s scalability=%s capability=%s\n",
                    report::format_quops(static_cast<double>(res.summary.q_t)).c_str(), q0.c_str(),
                    report::format_quops(*res.summary.qc).c_str(), sc.c_str(), cp.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"svbench: turn compiled quantum circuits into scalable volumetric benchmarks"};
    app.require_subcommand(1);

    std::string terms, select = "direct", prepare = "multiplexed", out;
    auto* lcu_cmd = app.add_subcommand("lcu", "build an LCU block-encoding circuit from a terms file");
    lcu_cmd->add_option("--terms", terms, "JSON list of {\"c\": coeff, \"p\": pauli}")->required();
    lcu_cmd->add_option("--select", select, "direct|unary");
    lcu_cmd->add_option("--prepare", prepare, "multiplexed|multicontrolled");
    lcu_cmd->add_option("-o,--out", out, "output circuit file")->required();

    std::string t_in, t_device;
    std::uint64_t t_seed = 0;
    std::string t_out;
    auto* tr_cmd = app.add_subcommand("transpile", "compile to native gates on a device");
    tr_cmd->add_option("--in", t_in, "input circuit")->required();
    tr_cmd->add_option("--device", t_device, "device file")->required();
    tr_cmd->add_option("--seed", t_seed, "routing seed");
    tr_cmd->add_option("-o,--out", t_out, "output circuit file")->required();

    std::string s_target, s_device, s_proto, s_shapes, s_growth = "qubit_uniform", s_out;
    int s_k = 5;
    std::uint64_t s_seed = 0;
    auto* sn_cmd = app.add_subcommand("snip", "sample subcircuit snippets from a compiled target");
    sn_cmd->add_option("--target", s_target, "compiled target circuit")->required();
    sn_cmd->add_option("--device", s_device, "device the target is compiled for")->required();
    sn_cmd->add_option("--proto", s_proto, "execution prototype device (default: device)");
    sn_cmd->add_option("--shapes", s_shapes, "comma-separated WxD list")->required();
    sn_cmd->add_option("-K,--snippets", s_k, "snippets per shape");
    sn_cmd->add_option("--seed", s_seed, "sampling seed");
    sn_cmd->add_option("--growth", s_growth, "qubit_uniform|edge_uniform");
    sn_cmd->add_option("-o,--out", s_out, "output directory")->required();

    std::string m_snippets, m_circuit, m_device, m_noise, m_out;
    std::uint64_t m_seed = 0;
    sim::SimBudget budget;
    auto* si_cmd = app.add_subcommand("simulate", "estimate snippet process fidelities under noise");
    si_cmd->add_option("--snippets", m_snippets, "snippet directory from `snip`");
    si_cmd->add_option("--circuit", m_circuit, "single circuit file (alternative to --snippets)");
    si_cmd->add_option("--device", m_device, "device file (required with crosstalk)");
    si_cmd->add_option("--noise", m_noise, "noise model file")->required();
    si_cmd->add_option("--seed", m_seed, "simulation seed");
    si_cmd->add_option("--fault-samples", budget.fault_samples, "mc fault samples");
    si_cmd->add_option("--state-samples", budget.state_samples, "mc state pairs per fault sample");
    si_cmd->add_option("--exact-max-width", budget.exact_max_width, "widest exact simulation");
    si_cmd->add_option("-o,--out", m_out, "output records.jsonl")->required();

    std::string a_records, a_shape, a_out;
    double a_threshold = analysis::kDefaultExclusionThreshold;
    auto* an_cmd = app.add_subcommand("analyze", "aggregate records into effective error rates");
    an_cmd->add_option("--records", a_records, "records.jsonl")->required();
    an_cmd->add_option("--target-shape", a_shape, "target WxD")->required();
    an_cmd->add_option("--threshold", a_threshold, "exclusion threshold (default 0.07)");
    an_cmd->add_option("-o,--out", a_out, "output directory")->required();

    std::string r_aggregates, r_summary, r_shape, r_out;
    auto* re_cmd = app.add_subcommand("report", "emit volumetric plot and summary table");
    re_cmd->add_option("--aggregates", r_aggregates, "aggregates.json")->required();
    re_cmd->add_option("--summary", r_summary, "summary.json");
    re_cmd->add_option("--target-shape", r_shape, "target WxD")->required();
    re_cmd->add_option("-o,--out", r_out, "output directory")->required();

    std::string b_config, b_out;
    std::uint64_t b_seed = 0;
    bool b_seed_set = false;
    auto* be_cmd = app.add_subcommand("bench", "full pipeline from a config file");
    be_cmd->add_option("--config", b_config, "config JSON")->required();
    auto* seed_opt = be_cmd->add_option("--seed", b_seed, "override the config seed");
    be_cmd->add_option("-o,--out", b_out, "output bundle directory")->required();

    CLI11_PARSE(app, argc, argv);
    b_seed_set = seed_opt->count() > 0;

    try {
        if (lcu_cmd->parsed()) return run_lcu(terms, select, prepare, out);
        if (tr_cmd->parsed()) return run_transpile(t_in, t_device, t_seed, t_out);
        if (sn_cmd->parsed())
            return run_snip(s_target, s_device, s_proto, s_shapes, s_k, s_seed, s_growth, s_out);
        if (si_cmd->parsed())
            return run_simulate(m_snippets, m_circuit, m_device, m_noise, m_seed, budget, m_out);
        if (an_cmd->parsed()) return run_analyze(a_records, a_shape, a_threshold, a_out);
        if (re_cmd->parsed()) return run_report(r_aggregates, r_summary, r_shape, r_out);
        if (be_cmd->parsed())
            return run_bench(b_config,
                             b_seed_set ? std::optional<std::uint64_t>(b_seed) : std::nullopt, b_out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const pipeline::StageFailure& e) {
        std::fprintf(stderr, "stage '%s' failed: %s\n", e.stage.c_str(), e.what());
        return 3;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
