#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svb/analysis.hpp"
#include "svb/circuit.hpp"
#include "svb/common.hpp"
#include "svb/lcu.hpp"
#include "svb/noise.hpp"
#include "svb/sim.hpp"
#include "svb/snip.hpp"

namespace svb::pipeline {

/// "WxD", e.g. "11x1277".
snip::Shape parse_shape(const std::string& text);

struct LcuStageConfig {
    std::string terms_path;
    lcu::SelectMode select = lcu::SelectMode::direct;
    lcu::PrepareMode prepare = lcu::PrepareMode::multiplexed;
};

struct PipelineConfig {
    std::uint64_t seed = 0;
    std::optional<LcuStageConfig> lcu;   // generate the target ...
    std::optional<std::string> target;   // ... or ingest a pre-compiled one
    std::string device_path;
    std::optional<std::string> proto_path;    // defaults to device
    std::optional<std::string> noise_path;    // absent -> records must be given
    std::optional<std::string> records_path;  // externally measured records
    std::vector<snip::Shape> shapes;
    int snippets_per_shape = 5;
    snip::GrowthRule growth = snip::GrowthRule::qubit_uniform;
    double exclusion_threshold = analysis::kDefaultExclusionThreshold;
    sim::SimBudget budget;
    std::optional<snip::Shape> target_shape;  // required for records-only runs

    std::string config_digest;  // filled by load_config
    std::string config_dir;
};

/// Parse a config file; relative paths resolve against the file's directory.
PipelineConfig load_config(const std::string& path);

/// Stage error carrying the failing stage's name (exit code 3 at the CLI).
struct StageFailure : Error {
    StageFailure(std::string stage_name, const std::string& what)
        : Error(what), stage(std::move(stage_name)) {}
    std::string stage;
};

struct PipelineResult {
    std::string out_dir;
    snip::Shape target_shape;
    int n_snippets = 0;
    int n_records = 0;
    int n_aggregates = 0;
    analysis::CapabilitySummary summary;
};

/// lcu-gen (optional) -> transpile -> snip -> simulate -> analyze -> report.
/// Bundle layout: target/, snippets/, records.jsonl, aggregates.json,
/// summary.json, summary.csv, volumetric.svg, volumetric.csv, manifest.json.
/// Deterministic for a fixed config and seed; partial outputs are retained on
/// stage failure.
PipelineResult run_pipeline(const PipelineConfig& cfg, const std::string& out_dir);

/// Snippet set persistence (snippets/ directory with provenance.json).
void write_snippets(const std::string& dir, const std::vector<snip::Snippet>& snippets);
std::vector<snip::Snippet> read_snippets(const std::string& dir);

std::vector<lcu::PauliTerm> load_terms(const std::string& path);

}  // namespace svb::pipeline
