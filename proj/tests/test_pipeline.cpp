#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "support/oracles.hpp"
#include "svb/io.hpp"
#include "svb/pipeline.hpp"

using namespace svb;
namespace fs = std::filesystem;

namespace {

const std::string kDataDir = std::string(SVB_SOURCE_DIR) + "/data";

std::string fresh_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir.string();
}

std::string slurp_tree(const std::string& dir) {
    // concatenated relative-path + content digest listing, for byte comparisons
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) {
            files.push_back(fs::relative(entry.path(), dir).string());
        }
    }
    std::sort(files.begin(), files.end());
    std::string out;
    for (const auto& f : files) {
        out += f + " " + io::fnv1a64_hex(io::read_text((fs::path(dir) / f).string())) + "\n";
    }
    return out;
}

}  // namespace

TEST_CASE("parse_shape") {
    const auto s = pipeline::parse_shape("11x1277");
    CHECK(s.w == 11);
    CHECK(s.d == 1277);
    CHECK_THROWS_AS(pipeline::parse_shape("11"), ConfigError);
    CHECK_THROWS_AS(pipeline::parse_shape("0x3"), ConfigError);
    CHECK_THROWS_AS(pipeline::parse_shape("ax3"), ConfigError);
}

TEST_CASE("config loading and validation") {
    const auto cfg = pipeline::load_config(kDataDir + "/configs/toy.json");
    CHECK(cfg.seed == 7);
    CHECK(cfg.shapes.size() == 9);
    CHECK(cfg.snippets_per_shape == 5);
    REQUIRE(cfg.lcu.has_value());
    CHECK(fs::exists(cfg.lcu->terms_path));
    CHECK(fs::exists(cfg.device_path));

    CHECK_THROWS_AS(pipeline::load_config(kDataDir + "/configs/missing.json"), ConfigError);
    const auto bad = fs::temp_directory_path() / "svb_bad_config.json";
    io::write_text(bad.string(), "{\"seed\": 1}");
    CHECK_THROWS_AS(pipeline::load_config(bad.string()), ConfigError);
}

TEST_CASE("toy pipeline: counted outputs of the committed example config") {
    const auto cfg = pipeline::load_config(kDataDir + "/configs/toy.json");
    const std::string out = fresh_dir("svb_toy_bundle");
    const auto res = pipeline::run_pipeline(cfg, out);
    CHECK(res.n_snippets == 45);   // 9 shapes x K=5
    CHECK(res.n_records == 45);
    CHECK(res.n_aggregates == 9);
    for (const char* f : {"target/circuit.json", "target/lcu_uncompiled.json", "target/layout.json",
                          "snippets/provenance.json", "records.jsonl", "aggregates.json",
                          "summary.json", "summary.csv", "volumetric.svg", "volumetric.csv",
                          "manifest.json"}) {
        CAPTURE(f);
        CHECK(fs::exists(fs::path(out) / f));
    }
    // every record came from the exact path here
    for (const auto& r : sim::parse_records_jsonl(io::read_text(out + "/records.jsonl"))) {
        CHECK(r.method == "exact");
    }
    // the planted depolarizing rate comes back out
    REQUIRE(res.summary.eps2.has_value());
    CHECK(*res.summary.eps2 == doctest::Approx(0.005).epsilon(0.02));
    REQUIRE(res.summary.scalability.has_value());
    CHECK(*res.summary.scalability == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("pipeline determinism: identical bundles for identical config+seed") {
    const auto cfg = pipeline::load_config(kDataDir + "/configs/toy.json");
    const std::string out1 = fresh_dir("svb_det_1");
    const std::string out2 = fresh_dir("svb_det_2");
    pipeline::run_pipeline(cfg, out1);
    pipeline::run_pipeline(cfg, out2);
    CHECK(slurp_tree(out1) == slurp_tree(out2));

    // a different seed must change the snippet draw
    auto cfg2 = cfg;
    cfg2.seed = 8;
    const std::string out3 = fresh_dir("svb_det_3");
    pipeline::run_pipeline(cfg2, out3);
    CHECK(slurp_tree(out1) != slurp_tree(out3));
}

TEST_CASE("external records skip snipping and simulation") {
    std::vector<sim::FidelityRecord> recs;
    for (int d : {2, 4}) {
        for (int w : {2, 3}) {
            for (int k = 0; k < 3; ++k) {
                recs.push_back({w, d, k, 0.9 - 0.02 * w - 0.01 * k, 0.01, "external", 0.0, false, ""});
            }
        }
    }
    const auto records_path = fs::temp_directory_path() / "svb_ext_records.jsonl";
    io::write_text(records_path.string(), sim::records_to_jsonl(recs));
    const auto config_path = fs::temp_directory_path() / "svb_ext_config.json";
    io::write_text(config_path.string(), std::string("{\n") + "  \"seed\": 3,\n" +
                                             "  \"records\": \"" + records_path.string() + "\",\n" +
                                             "  \"target_shape\": \"11x1277\"\n}\n");
    const auto cfg = pipeline::load_config(config_path.string());
    const std::string out = fresh_dir("svb_ext_bundle");
    const auto res = pipeline::run_pipeline(cfg, out);
    CHECK(res.n_snippets == 0);
    CHECK(res.n_records == 12);
    CHECK(res.n_aggregates == 4);
    CHECK(res.target_shape.w == 11);
    const auto manifest = io::json::parse(io::read_text(out + "/manifest.json"));
    const auto stages = manifest.at("stages");
    CHECK(std::find(stages.begin(), stages.end(), "simulate") == stages.end());
    CHECK(std::find(stages.begin(), stages.end(), "ingest-records") != stages.end());
}

TEST_CASE("pre-compiled targets are ingested and validated") {
    // compile once, then feed the compiled circuit back through 'target'
    const auto cfg0 = pipeline::load_config(kDataDir + "/configs/toy.json");
    const std::string first = fresh_dir("svb_precompiled_src");
    pipeline::run_pipeline(cfg0, first);

    auto cfg = cfg0;
    cfg.lcu.reset();
    cfg.target = first + "/target/circuit.json";
    const std::string out = fresh_dir("svb_precompiled_bundle");
    const auto res = pipeline::run_pipeline(cfg, out);
    CHECK(res.n_snippets == 45);
    const auto manifest = io::json::parse(io::read_text(out + "/manifest.json"));
    CHECK_FALSE(fs::exists(fs::path(out) / "target" / "lcu_uncompiled.json"));

    // a target that is not fully compiled for the device is rejected
    auto bad = cfg;
    const auto raw = fs::temp_directory_path() / "svb_uncompiled_target.json";
    io::write_text(raw.string(),
                   R"({"qubits": ["d0", "d1"], "layers": [[{"g": "mcx", "q": ["d0", "d1"]}]]})");
    bad.target = raw.string();
    try {
        pipeline::run_pipeline(bad, fresh_dir("svb_precompiled_bad"));
        FAIL("expected a target-stage failure");
    } catch (const pipeline::StageFailure& e) {
        CHECK(e.stage == "target");
        CHECK(std::string(e.what()).find("not fully compiled") != std::string::npos);
    }
}

TEST_CASE("stage failures carry the stage name and keep partial outputs") {
    auto cfg = pipeline::load_config(kDataDir + "/configs/toy.json");
    const auto broken_noise = fs::temp_directory_path() / "svb_broken_noise.json";
    io::write_text(broken_noise.string(), "{\"rules\": [{\"dep\": 5.0}]}");
    cfg.noise_path = broken_noise.string();
    const std::string out = fresh_dir("svb_fail_bundle");
    try {
        pipeline::run_pipeline(cfg, out);
        FAIL("expected a stage failure");
    } catch (const pipeline::StageFailure& e) {
        CHECK(e.stage == "simulate");
    }
    CHECK(fs::exists(fs::path(out) / "target" / "circuit.json"));     // earlier stages retained
    CHECK(fs::exists(fs::path(out) / "snippets" / "provenance.json"));
    CHECK_FALSE(fs::exists(fs::path(out) / "records.jsonl"));
}

TEST_CASE("snippet persistence round-trips") {
    const auto rc = testing::random_native_circuit(4, 6, 3, 0.5);
    const auto snippets =
        snip::sample_snippets(rc.circuit, rc.device, rc.device, {{2, 3}, {3, 4}}, 3, 77);
    const std::string dir = fresh_dir("svb_snips");
    pipeline::write_snippets(dir, snippets);
    const auto back = pipeline::read_snippets(dir);
    REQUIRE(back.size() == snippets.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(semantically_equal(back[i].circuit, snippets[i].circuit));
        CHECK(back[i].start_layer == snippets[i].start_layer);
        CHECK(back[i].dropped_gates == snippets[i].dropped_gates);
        CHECK(back[i].total_boundary_gates == snippets[i].total_boundary_gates);
        CHECK(back[i].qubit_set == snippets[i].qubit_set);
    }
}
