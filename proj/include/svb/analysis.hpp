#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svb/common.hpp"
#include "svb/sim.hpp"

namespace svb::analysis {

/// Per-shape aggregate: geometric-mean fidelity and effective error per quop
/// eps = 1 - GM^(1/(w d)). Shapes with any record below the exclusion
/// threshold are excluded (kept as data, not errors).
struct ShapeAggregate {
    int w = 0;
    int d = 0;
    int k_used = 0;
    double gm_fidelity = 0.0;
    double eps = 0.0;
    double eps_stderr = 0.0;
    bool excluded = false;
    std::string reason;
    double mean_dropped_frac = 0.0;
};

inline constexpr double kDefaultExclusionThreshold = 0.07;

/// Aggregate the records of one shape. All records must share (w,d).
ShapeAggregate aggregate_shape(const std::vector<sim::FidelityRecord>& records,
                               double threshold = kDefaultExclusionThreshold);

/// Group records by shape (w-major, then d) and aggregate each group.
std::vector<ShapeAggregate> aggregate_all(const std::vector<sim::FidelityRecord>& records,
                                          double threshold = kDefaultExclusionThreshold);

/// F_hat = (1 - eps)^quops, evaluated in log space. linear is absent below
/// 1e-300.
struct FidelityPrediction {
    double log10_f = 0.0;
    std::optional<double> f;
};
FidelityPrediction predict_target_fidelity(double eps, long long quops);

/// Unweighted mean of eps over the non-excluded depths at one width;
/// absent when every depth is excluded.
std::optional<double> depth_average(const std::vector<ShapeAggregate>& aggregates_at_width);

/// eps_w for every width with at least one surviving depth.
std::map<int, double> depth_average_table(const std::vector<ShapeAggregate>& aggregates);

struct CapabilitySummary {
    long long q_t = 0;
    int target_w = 0;
    int target_d = 0;
    int w_max = 0;
    std::optional<double> eps2, eps_wmax;
    std::optional<double> q0, qc;             // predicted / observed capability (quops)
    std::optional<double> f0_log10, f_log10;  // predicted target fidelities
    std::optional<double> f0_linear, f_linear;
    std::optional<double> scalability;  // Q_C / Q_0
    std::optional<double> capability;   // Q_C / Q_T
};

/// Q_0 = 1/eps_2, Q_C = 1/eps_{w_max}, plus coefficients and fidelity
/// predictions. Strict mode throws IncompleteDataError naming the missing
/// widths; allow_partial fills what it can and leaves the rest empty.
CapabilitySummary capability_summary(const std::map<int, double>& eps_w, int target_w, int target_d,
                                     bool allow_partial = false);

}  // namespace svb::analysis
