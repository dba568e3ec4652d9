#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svb/circuit.hpp"
#include "svb/common.hpp"
#include "svb/noise.hpp"
#include "svb/rng.hpp"
#include "svb/snip.hpp"

namespace svb::sim {

/// One snippet's fidelity estimate. method is "exact", "mc" or "external".
struct FidelityRecord {
    int w = 0;
    int d = 0;
    int k = 0;
    double f = 0.0;
    double stderr_f = 0.0;
    std::string method;
    double dropped_frac = 0.0;
    bool failed = false;
    std::string error;
};

struct SimBudget {
    int fault_samples = 2000;
    int state_samples = 1;
    int exact_max_width = 6;
    int mc_max_width = 20;
};

/// Process fidelity F = <Psi|(I (x) E)[|Psi><Psi|]|Psi> of the noisy channel
/// against the ideal unitary, computed exactly by propagating every Pauli
/// basis element through both. Capacity-capped (default 6 qubits).
/// The device supplies crosstalk adjacency; the overload without it requires
/// gamma == 0.
double exact_process_fidelity(const Circuit& c, const DeviceModel& dev, const NoiseModel& nm,
                              int max_width = 6);
double exact_process_fidelity(const Circuit& c, const NoiseModel& nm, int max_width = 6);

struct McEstimate {
    double f = 0.0;
    double stderr_f = 0.0;
};

/// Unbiased Monte Carlo estimator: sampled fault configurations, each scored
/// by the product of two independent Haar-random-state trace estimates.
McEstimate mc_process_fidelity(const Circuit& c, const DeviceModel& dev, const NoiseModel& nm,
                               int fault_samples, int state_samples, Rng& rng, int max_width = 20);
McEstimate mc_process_fidelity(const Circuit& c, const NoiseModel& nm, int fault_samples,
                               int state_samples, Rng& rng, int max_width = 20);

/// Analytic zero-fault product prod_ij (1 - eps_ij) over all width x depth
/// locations (crosstalk-scaled). Stochastic models only.
double zero_fault_bound(const Circuit& c, const DeviceModel& dev, const NoiseModel& nm);
double zero_fault_bound(const Circuit& c, const NoiseModel& nm);

/// Exact-vs-mc dispatch per snippet width; per-snippet derived seeds; failures
/// become failed records instead of aborting the batch.
std::vector<FidelityRecord> run_snippet_batch(const std::vector<snip::Snippet>& snippets,
                                              const DeviceModel& proto, const NoiseModel& nm,
                                              const SimBudget& budget, std::uint64_t seed);

/// Per-qubit count of device-adjacent qubits carrying operations in the
/// circuit (idles included, per the quop convention); drives the crosstalk
/// multiplier.
std::vector<int> active_neighbor_counts(const Circuit& c, const DeviceModel& dev);

/// JSON-lines wire format: {"w":..,"d":..,"k":..,"F":..,"stderr":..,"method":..}
/// plus optional dropped_frac / failure fields. Externally measured records
/// use method="external".
std::string record_to_json_line(const FidelityRecord& rec);
std::string records_to_jsonl(const std::vector<FidelityRecord>& recs);
std::vector<FidelityRecord> parse_records_jsonl(const std::string& text);

}  // namespace svb::sim
