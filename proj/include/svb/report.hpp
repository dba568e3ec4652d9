#pragma once

#include <string>
#include <vector>

#include "svb/analysis.hpp"
#include "svb/common.hpp"
#include "svb/snip.hpp"

namespace svb::report {

/// One cell of the volumetric plot.
struct VolumetricCell {
    int w = 0;
    int d = 0;
    double mean_fidelity = 0.0;
    double dropped_fraction = 0.0;
    double marker_size = 1.0;  // relative side length, monotone in retained fraction
    bool is_target = false;
    bool excluded = false;
    std::string variant;
};

/// A record set to plot; at most two variants may be overlaid.
struct VolumetricSeries {
    std::string variant = "base";
    std::vector<analysis::ShapeAggregate> aggregates;
};

std::vector<VolumetricCell> volumetric_cells(const std::vector<VolumetricSeries>& series,
                                             snip::Shape target);

/// SVG (depth on a log axis, width vertical, fixed 8-stop color ramp, star at
/// the target shape, hollow squares for excluded cells) plus a CSV with one
/// row per cell. Byte-deterministic for fixed inputs.
void emit_volumetric(const std::vector<VolumetricSeries>& series, snip::Shape target,
                     const std::string& svg_path, const std::string& csv_path);
void emit_volumetric(const std::vector<analysis::ShapeAggregate>& aggregates, snip::Shape target,
                     const std::string& svg_path, const std::string& csv_path);

/// Summary-table row: algorithm size, predicted/observed capability,
/// scalability and capability coefficients. Display precision is two
/// significant figures (percentages below 10% show one); the JSON carries full
/// precision. Missing fields render as "n/a".
void emit_summary(const analysis::CapabilitySummary& summary, const std::string& csv_path,
                  const std::string& json_path);

std::string summary_csv_text(const analysis::CapabilitySummary& summary);
std::string summary_json_text(const analysis::CapabilitySummary& summary);
std::string aggregates_json_text(const std::vector<analysis::ShapeAggregate>& aggregates);
std::vector<analysis::ShapeAggregate> parse_aggregates_json(const std::string& text);

/// Round to `sig` significant figures.
double round_sig(double x, int sig);
/// Display formats used by the summary table.
std::string format_quops(double q);
std::string format_percent(double fraction);

}  // namespace svb::report
