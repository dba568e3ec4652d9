#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svb/common.hpp"

namespace svb {

/// One gate application. Names are canonicalized to lowercase; angles are radians.
struct Gate {
    std::string name;
    std::vector<std::string> qubits;
    std::vector<double> params;

    Gate() = default;
    Gate(std::string n, std::vector<std::string> q, std::vector<double> p = {})
        : name(std::move(n)), qubits(std::move(q)), params(std::move(p)) {}
};

/// Gate-name registry: arity and parameter count for the vocabulary this
/// toolkit generates and simulates. Multi-controlled gates (mcx/mcy/mcz/mcry)
/// take any number of controls; the last qubit is the target.
struct GateInfo {
    int arity;        // -1 for variadic (>= 2)
    int param_count;  // rotation angles
};
std::optional<GateInfo> gate_info(const std::string& lowercase_name);
std::string to_lower(const std::string& s);

/// Layered circuit over labeled qubits. Layers are compilation barriers;
/// qubits without a gate in a layer are implicitly idle (still counted as
/// operations). Immutable after construction.
class Circuit {
public:
    Circuit() = default;
    /// Validates: distinct qubits per gate, arity/params for known names,
    /// finite params, no qubit twice per layer, gate qubits declared.
    Circuit(std::vector<std::string> qubits, std::vector<std::vector<Gate>> layers);

    int width() const { return static_cast<int>(qubits_.size()); }
    int depth() const { return static_cast<int>(layers_.size()); }
    const std::vector<std::string>& qubits() const { return qubits_; }
    const std::vector<std::vector<Gate>>& layers() const { return layers_; }

    /// Dense index of a label, or -1.
    int qubit_index(const std::string& label) const;

    /// Gate covering (qubit, layer), or nullptr when idle there.
    const Gate* gate_at(int qubit_idx, int layer) const;

private:
    std::vector<std::string> qubits_;
    std::vector<std::vector<Gate>> layers_;
    std::map<std::string, int> index_;
    // per layer: qubit index -> position in layer gate list, -1 idle
    std::vector<std::vector<int>> occupancy_;
};

struct NativeGate {
    std::string name;  // lowercase
    int arity = 1;
};

/// Qubit connectivity plus native gate set; defines the "fully compiled" property.
class DeviceModel {
public:
    DeviceModel() = default;
    DeviceModel(std::vector<std::string> qubits, std::vector<std::pair<std::string, std::string>> edges,
                std::vector<NativeGate> native);

    const std::vector<std::string>& qubits() const { return qubits_; }
    const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }
    const std::vector<NativeGate>& native_gates() const { return native_; }

    bool has_qubit(const std::string& label) const;
    bool coupled(const std::string& a, const std::string& b) const;
    /// Neighbors in declaration order (deterministic).
    const std::vector<std::string>& neighbors(const std::string& label) const;
    bool has_native(const std::string& name, int arity) const;
    bool connected() const;

private:
    std::vector<std::string> qubits_;
    std::vector<std::pair<std::string, std::string>> edges_;
    std::vector<NativeGate> native_;
    std::map<std::string, std::vector<std::string>> adj_;
};

struct Violation {
    int layer;
    Gate gate;
    std::string reason;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

/// Checks the fully-compiled property: native gate names/arities, coupled
/// multi-qubit supports, device-resident qubits. Violations are data, not errors.
ValidationReport validate_compiled(const Circuit& c, const DeviceModel& dev);

struct ShapeInfo {
    int width = 0;
    int depth = 0;
    long long quops = 0;  // width * depth, idles included
};
ShapeInfo circuit_shape(const Circuit& c);

/// Adjoint circuit for the generator/native vocabulary (reversed layers,
/// per-gate inverse). Throws InputError for names without a known inverse.
Circuit adjoint(const Circuit& c);

/// Concatenate b after a; qubit set is the union (a's order first).
Circuit concat(const Circuit& a, const Circuit& b);

/// Same content up to param tolerance (layers, gate order, labels).
bool semantically_equal(const Circuit& a, const Circuit& b, double param_tol = 1e-12);

}  // namespace svb
