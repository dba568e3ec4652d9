#include "svb/pipeline.hpp"

#include <filesystem>

#include "svb/io.hpp"
#include "svb/report.hpp"
#include "svb/transpile.hpp"

namespace svb::pipeline {

namespace fs = std::filesystem;

snip::Shape parse_shape(const std::string& text) {
    const auto x = text.find('x');
    if (x == std::string::npos) throw ConfigError("shape must look like WxD, got '" + text + "'");
    try {
        snip::Shape s;
        s.w = std::stoi(text.substr(0, x));
        s.d = std::stoi(text.substr(x + 1));
        if (s.w < 1 || s.d < 1) throw ConfigError("shape must be >= 1x1");
        return s;
    } catch (const std::logic_error&) {
        throw ConfigError("shape must look like WxD, got '" + text + "'");
    }
}

std::vector<lcu::PauliTerm> load_terms(const std::string& path) {
    io::json j;
    try {
        j = io::json::parse(io::read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("terms file: ") + e.what(), e.byte);
    }
    std::vector<lcu::PauliTerm> terms;
    for (const auto& jt : j) {
        lcu::PauliTerm t;
        t.coeff = jt.at("c").get<double>();
        t.pauli = jt.at("p").get<std::string>();
        terms.push_back(std::move(t));
    }
    return terms;
}

namespace {

std::string resolve(const std::string& base_dir, const std::string& path) {
    fs::path p(path);
    if (p.is_absolute()) return p.lexically_normal().string();
    return (fs::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

PipelineConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = io::read_text(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    io::json j;
    try {
        j = io::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse: ") + e.what());
    }
    PipelineConfig cfg;
    cfg.config_digest = io::fnv1a64_hex(text);
    cfg.config_dir = fs::path(path).parent_path().string();
    try {
        cfg.seed = j.value("seed", 0ull);
        if (j.contains("lcu")) {
            LcuStageConfig lc;
            const auto& jl = j.at("lcu");
            lc.terms_path = resolve(cfg.config_dir, jl.at("terms").get<std::string>());
            lc.select = lcu::select_mode_from_string(jl.value("select", "direct"));
            lc.prepare = lcu::prepare_mode_from_string(jl.value("prepare", "multiplexed"));
            cfg.lcu = std::move(lc);
        }
        if (j.contains("target")) cfg.target = resolve(cfg.config_dir, j.at("target").get<std::string>());
        if (j.contains("device")) cfg.device_path = resolve(cfg.config_dir, j.at("device").get<std::string>());
        if (j.contains("proto")) cfg.proto_path = resolve(cfg.config_dir, j.at("proto").get<std::string>());
        if (j.contains("noise")) cfg.noise_path = resolve(cfg.config_dir, j.at("noise").get<std::string>());
        if (j.contains("records"))
            cfg.records_path = resolve(cfg.config_dir, j.at("records").get<std::string>());
        if (j.contains("shapes")) {
            for (const auto& js : j.at("shapes")) cfg.shapes.push_back(parse_shape(js.get<std::string>()));
        }
        cfg.snippets_per_shape = j.value("snippets_per_shape", 5);
        if (j.contains("growth_rule"))
            cfg.growth = snip::growth_rule_from_string(j.at("growth_rule").get<std::string>());
        cfg.exclusion_threshold = j.value("exclusion_threshold", analysis::kDefaultExclusionThreshold);
        if (j.contains("sim")) {
            const auto& js = j.at("sim");
            cfg.budget.fault_samples = js.value("fault_samples", cfg.budget.fault_samples);
            cfg.budget.state_samples = js.value("state_samples", cfg.budget.state_samples);
            cfg.budget.exact_max_width = js.value("exact_max_width", cfg.budget.exact_max_width);
            cfg.budget.mc_max_width = js.value("mc_max_width", cfg.budget.mc_max_width);
        }
        if (j.contains("target_shape"))
            cfg.target_shape = parse_shape(j.at("target_shape").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }

    const bool have_target = cfg.lcu.has_value() || cfg.target.has_value();
    if (!have_target && !cfg.records_path)
        throw ConfigError("config needs 'lcu', 'target', or 'records'");
    if (!have_target && !cfg.target_shape)
        throw ConfigError("records-only runs need 'target_shape'");
    if (have_target && cfg.device_path.empty()) throw ConfigError("config needs 'device'");
    if (have_target && cfg.shapes.empty()) throw ConfigError("config needs 'shapes'");
    if (!cfg.records_path && !cfg.noise_path && have_target)
        throw ConfigError("config needs 'noise' (or external 'records')");
    return cfg;
}

void write_snippets(const std::string& dir, const std::vector<snip::Snippet>& snippets) {
    fs::create_directories(dir);
    io::json prov;
    prov["schema"] = "svb.snippets/1";
    io::json arr = io::json::array();
    for (const auto& s : snippets) {
        const std::string file =
            "s" + std::to_string(s.shape.w) + "x" + std::to_string(s.shape.d) + "_k" +
            std::to_string(s.index) + ".json";
        io::save_circuit(s.circuit, (fs::path(dir) / file).string());
        io::json js;
        js["file"] = file;
        js["w"] = s.shape.w;
        js["d"] = s.shape.d;
        js["k"] = s.index;
        js["start_layer"] = s.start_layer;
        js["qubits"] = s.qubit_set;
        io::json relab;
        for (const auto& [dev_q, proto_q] : s.relabeling) relab[dev_q] = proto_q;
        js["relabeling"] = std::move(relab);
        js["dropped_gates"] = s.dropped_gates;
        js["total_boundary_gates"] = s.total_boundary_gates;
        arr.push_back(std::move(js));
    }
    prov["snippets"] = std::move(arr);
    io::write_text((fs::path(dir) / "provenance.json").string(), prov.dump(2) + "\n");
}

std::vector<snip::Snippet> read_snippets(const std::string& dir) {
    const std::string prov_path = (fs::path(dir) / "provenance.json").string();
    io::json prov;
    try {
        prov = io::json::parse(io::read_text(prov_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("provenance: ") + e.what(), e.byte);
    }
    std::vector<snip::Snippet> out;
    for (const auto& js : prov.at("snippets")) {
        snip::Snippet s;
        s.circuit = io::load_circuit((fs::path(dir) / js.at("file").get<std::string>()).string());
        s.shape.w = js.at("w").get<int>();
        s.shape.d = js.at("d").get<int>();
        s.index = js.at("k").get<int>();
        s.start_layer = js.value("start_layer", 0);
        if (js.contains("qubits")) {
            for (const auto& q : js.at("qubits")) s.qubit_set.push_back(q.get<std::string>());
        }
        if (js.contains("relabeling")) {
            for (const auto& [k, v] : js.at("relabeling").items()) s.relabeling[k] = v.get<std::string>();
        }
        s.dropped_gates = js.value("dropped_gates", 0);
        s.total_boundary_gates = js.value("total_boundary_gates", 0);
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

template <typename F>
void run_stage(const std::string& name, F&& fn) {
    try {
        fn();
    } catch (const StageFailure&) {
        throw;
    } catch (const Error& e) {
        throw StageFailure(name, e.what());
    } catch (const std::exception& e) {
        throw StageFailure(name, e.what());
    }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, const std::string& out_dir) {
    PipelineResult res;
    res.out_dir = out_dir;
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    io::json manifest;
    manifest["schema"] = "svb.manifest/1";
    manifest["version"] = kVersion;
    manifest["seed"] = cfg.seed;
    manifest["config_digest"] = cfg.config_digest;
    io::json inputs = io::json::object();
    io::json stages = io::json::array();
    auto record_input = [&](const std::string& path) {
        inputs[fs::path(path).filename().string()] = io::fnv1a64_hex(io::read_text(path));
    };

    std::optional<Circuit> target_circuit;
    std::optional<DeviceModel> device;
    std::optional<DeviceModel> proto;

    if (cfg.lcu || cfg.target) {
        run_stage("target", [&] {
            device = io::load_device(cfg.device_path);
            record_input(cfg.device_path);
            fs::create_directories(out / "target");
            if (cfg.lcu) {
                record_input(cfg.lcu->terms_path);
                const auto terms = load_terms(cfg.lcu->terms_path);
                const auto spec = lcu::plan_registers(terms, cfg.lcu->select);
                lcu::AssembleOptions opts;
                opts.prepare = cfg.lcu->prepare;
                const Circuit raw = lcu::assemble_lcu(spec, opts);
                io::save_circuit(raw, (out / "target" / "lcu_uncompiled.json").string());
                const auto routed = transpile::transpile_circuit(raw, *device, cfg.seed);
                target_circuit = routed.circuit;
                io::json layout;
                layout["schema"] = "svb.layout/1";
                io::json init = io::json::object(), fin = io::json::object();
                for (const auto& [cq, dq] : routed.initial_layout) init[cq] = dq;
                for (const auto& [cq, dq] : routed.final_permutation) fin[cq] = dq;
                layout["initial_layout"] = std::move(init);
                layout["final_permutation"] = std::move(fin);
                layout["inserted_swaps"] = routed.inserted_swaps;
                io::write_text((out / "target" / "layout.json").string(), layout.dump(2) + "\n");
            } else {
                record_input(*cfg.target);
                target_circuit = io::load_circuit(*cfg.target);
            }
            const auto report = validate_compiled(*target_circuit, *device);
            if (!report.ok) {
                throw InputError("target circuit is not fully compiled for the device (" +
                                 report.violations.front().reason + ")");
            }
            io::save_circuit(*target_circuit, (out / "target" / "circuit.json").string());
            stages.push_back("target");
        });
    }

    std::vector<snip::Snippet> snippets;
    std::vector<sim::FidelityRecord> records;
    if (cfg.records_path) {
        run_stage("ingest-records", [&] {
            record_input(*cfg.records_path);
            records = sim::parse_records_jsonl(io::read_text(*cfg.records_path));
            io::write_text((out / "records.jsonl").string(), sim::records_to_jsonl(records));
            stages.push_back("ingest-records");
        });
    } else {
        run_stage("snip", [&] {
            proto = cfg.proto_path ? io::load_device(*cfg.proto_path) : *device;
            if (cfg.proto_path) record_input(*cfg.proto_path);
            snippets = snip::sample_snippets(*target_circuit, *device, *proto, cfg.shapes,
                                             cfg.snippets_per_shape, derive_seed(cfg.seed, 0x5e1),
                                             cfg.growth);
            write_snippets((out / "snippets").string(), snippets);
            res.n_snippets = static_cast<int>(snippets.size());
            stages.push_back("snip");
        });
        run_stage("simulate", [&] {
            record_input(*cfg.noise_path);
            const auto nm = sim::load_noise_model(*cfg.noise_path);
            records = sim::run_snippet_batch(snippets, *proto, nm, cfg.budget,
                                             derive_seed(cfg.seed, 0x51e));
            io::write_text((out / "records.jsonl").string(), sim::records_to_jsonl(records));
            stages.push_back("simulate");
        });
    }
    res.n_records = static_cast<int>(records.size());

    std::vector<analysis::ShapeAggregate> aggregates;
    run_stage("analyze", [&] {
        if (target_circuit) {
            res.target_shape = {target_circuit->width(), target_circuit->depth()};
        } else {
            res.target_shape = *cfg.target_shape;
        }
        aggregates = analysis::aggregate_all(records, cfg.exclusion_threshold);
        res.n_aggregates = static_cast<int>(aggregates.size());
        io::write_text((out / "aggregates.json").string(), report::aggregates_json_text(aggregates));
        const auto eps_w = analysis::depth_average_table(aggregates);
        res.summary = analysis::capability_summary(eps_w, res.target_shape.w, res.target_shape.d,
                                                   /*allow_partial=*/true);
        stages.push_back("analyze");
    });

    run_stage("report", [&] {
        report::emit_summary(res.summary, (out / "summary.csv").string(),
                             (out / "summary.json").string());
        report::emit_volumetric(aggregates, res.target_shape, (out / "volumetric.svg").string(),
                                (out / "volumetric.csv").string());
        stages.push_back("report");
    });

    manifest["inputs"] = std::move(inputs);
    manifest["stages"] = std::move(stages);
    io::json counts;
    counts["snippets"] = res.n_snippets;
    counts["records"] = res.n_records;
    counts["aggregates"] = res.n_aggregates;
    manifest["counts"] = std::move(counts);
    manifest["target_shape"] =
        std::to_string(res.target_shape.w) + "x" + std::to_string(res.target_shape.d);
    io::write_text((out / "manifest.json").string(), manifest.dump(2) + "\n");
    return res;
}

}  // namespace svb::pipeline
