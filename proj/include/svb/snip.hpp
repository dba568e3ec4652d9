#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "svb/circuit.hpp"
#include "svb/common.hpp"
#include "svb/rng.hpp"

namespace svb::snip {

struct Shape {
    int w = 1;
    int d = 1;
};

/// Shape-(w,d) subcircuit with provenance. The circuit is relabeled onto the
/// prototype device; qubit_set keeps the original device labels.
struct Snippet {
    Circuit circuit;
    Shape shape;
    int index = 0;  // k within its shape
    int start_layer = 0;
    std::vector<std::string> qubit_set;                // target-device labels retained
    std::map<std::string, std::string> relabeling;     // target-device label -> proto label
    int dropped_gates = 0;
    int total_boundary_gates = 0;  // dropped + retained gates acting on qubit_set
};

enum class GrowthRule { qubit_uniform, edge_uniform };
GrowthRule growth_rule_from_string(const std::string& s);

/// Uniform window start in {0, ..., depth - d}.
int sample_layer_window(const Circuit& c, int d, Rng& rng);

/// Connected w-qubit subset of `eligible`: uniform seed, then repeated growth.
/// qubit_uniform picks uniformly over distinct frontier qubits; edge_uniform
/// over boundary edges.
std::vector<std::string> sample_qubit_subset(const DeviceModel& dev,
                                             const std::vector<std::string>& eligible, int w, Rng& rng,
                                             GrowthRule rule = GrowthRule::qubit_uniform);

/// Random induced-subgraph embedding of proto into dev (proto label -> dev
/// label). Identity when the two devices are label-identical. Throws
/// EmbeddingError when no equivalent subset is found.
std::map<std::string, std::string> sample_equivalent_subset(const DeviceModel& dev,
                                                            const DeviceModel& proto, Rng& rng);

/// The three-step snipping algorithm: layer window, proto-equivalent subset,
/// connected w-qubit growth; boundary-crossing multi-qubit gates are dropped.
Snippet sample_snippet(const Circuit& c, const DeviceModel& dev, const DeviceModel& proto, Shape shape,
                       Rng& rng, GrowthRule rule = GrowthRule::qubit_uniform);

double dropped_gate_fraction(const Snippet& s);

/// K snippets per shape with counter-derived sub-seeds (concurrency-safe,
/// reproducible).
std::vector<Snippet> sample_snippets(const Circuit& c, const DeviceModel& dev,
                                     const DeviceModel& proto, const std::vector<Shape>& shapes,
                                     int k_per_shape, std::uint64_t seed,
                                     GrowthRule rule = GrowthRule::qubit_uniform);

}  // namespace svb::snip
