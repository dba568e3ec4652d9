#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "svb/circuit.hpp"
#include "svb/common.hpp"

namespace svb::transpile {

/// Fixed native target: z-rotations (any angle), sqrt-X, and cx.
struct GateSetTarget {
    double tolerance = 1e-12;
};

/// Rewrite the generator vocabulary (Y-rotations, Paulis, multi-controlled
/// Paulis, controlled rotations, ...) into rz/sx/cx, preserving the unitary up
/// to global phase. One gate per output layer; layerize() packs afterwards.
Circuit decompose_to_native(const Circuit& c, const GateSetTarget& target = {});

struct RouteResult {
    Circuit circuit;  // spans every device qubit
    std::map<std::string, std::string> initial_layout;     // circuit qubit -> device qubit
    std::map<std::string, std::string> final_permutation;  // circuit qubit -> device qubit after swaps
    int inserted_swaps = 0;
};

/// Trivial identity placement plus greedy shortest-path swap insertion
/// (swaps emitted as 3 cx). Deterministic for a fixed seed.
RouteResult place_and_route(const Circuit& c, const DeviceModel& dev, std::uint64_t seed);

/// Greedy as-soon-as-possible layer packing; per-qubit gate order preserved.
Circuit layerize(const Circuit& c);

/// decompose -> place_and_route -> layerize.
RouteResult transpile_circuit(const Circuit& c, const DeviceModel& dev, std::uint64_t seed,
                              const GateSetTarget& target = {});

}  // namespace svb::transpile
