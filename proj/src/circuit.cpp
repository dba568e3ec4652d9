#include "svb/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace svb {

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

std::optional<GateInfo> gate_info(const std::string& name) {
    static const std::map<std::string, GateInfo> table = {
        {"id", {1, 0}},   {"x", {1, 0}},    {"y", {1, 0}},    {"z", {1, 0}},   {"h", {1, 0}},
        {"s", {1, 0}},    {"sdg", {1, 0}},  {"t", {1, 0}},    {"tdg", {1, 0}}, {"sx", {1, 0}},
        {"sxdg", {1, 0}}, {"rx", {1, 1}},   {"ry", {1, 1}},   {"rz", {1, 1}},  {"p", {1, 1}},
        {"u", {1, 3}},    {"cx", {2, 0}},   {"cz", {2, 0}},   {"swap", {2, 0}},
        {"mcx", {-1, 0}}, {"mcy", {-1, 0}}, {"mcz", {-1, 0}}, {"mcry", {-1, 1}},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

Circuit::Circuit(std::vector<std::string> qubits, std::vector<std::vector<Gate>> layers)
    : qubits_(std::move(qubits)), layers_(std::move(layers)) {
    for (std::size_t i = 0; i < qubits_.size(); ++i) {
        if (!index_.emplace(qubits_[i], static_cast<int>(i)).second)
            throw StructuralError("duplicate qubit label '" + qubits_[i] + "'");
    }
    occupancy_.assign(layers_.size(), {});
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        auto& occ = occupancy_[li];
        occ.assign(qubits_.size(), -1);
        for (std::size_t gi = 0; gi < layers_[li].size(); ++gi) {
            Gate& g = layers_[li][gi];
            g.name = to_lower(g.name);
            if (g.qubits.empty())
                throw StructuralError("gate '" + g.name + "' with no qubits in layer " + std::to_string(li));
            std::set<std::string> distinct(g.qubits.begin(), g.qubits.end());
            if (distinct.size() != g.qubits.size())
                throw StructuralError("gate '" + g.name + "' repeats a qubit in layer " + std::to_string(li));
            if (auto info = gate_info(g.name)) {
                const int arity = static_cast<int>(g.qubits.size());
                if (info->arity >= 0 && info->arity != arity)
                    throw StructuralError("gate '" + g.name + "' expects arity " + std::to_string(info->arity) +
                                          ", got " + std::to_string(arity));
                if (info->arity < 0 && arity < 2)
                    throw StructuralError("multi-controlled gate '" + g.name + "' needs >= 2 qubits");
                if (static_cast<int>(g.params.size()) != info->param_count)
                    throw StructuralError("gate '" + g.name + "' expects " + std::to_string(info->param_count) +
                                          " params");
            }
            for (double p : g.params) {
                if (!std::isfinite(p)) throw StructuralError("non-finite parameter on gate '" + g.name + "'");
            }
            for (const auto& q : g.qubits) {
                auto it = index_.find(q);
                if (it == index_.end())
                    throw StructuralError("gate '" + g.name + "' references undeclared qubit '" + q + "'");
                if (occ[it->second] != -1)
                    throw StructuralError("qubit '" + q + "' appears twice in layer " + std::to_string(li));
                occ[it->second] = static_cast<int>(gi);
            }
        }
    }
}

int Circuit::qubit_index(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
}

const Gate* Circuit::gate_at(int qubit_idx, int layer) const {
    if (layer < 0 || layer >= depth() || qubit_idx < 0 || qubit_idx >= width()) return nullptr;
    const int gi = occupancy_[layer][qubit_idx];
    return gi < 0 ? nullptr : &layers_[layer][gi];
}

DeviceModel::DeviceModel(std::vector<std::string> qubits,
                         std::vector<std::pair<std::string, std::string>> edges,
                         std::vector<NativeGate> native)
    : qubits_(std::move(qubits)), edges_(std::move(edges)), native_(std::move(native)) {
    std::set<std::string> declared(qubits_.begin(), qubits_.end());
    if (declared.size() != qubits_.size()) throw StructuralError("duplicate device qubit label");
    for (auto& q : qubits_) adj_[q];
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& [a, b] : edges_) {
        if (a == b) throw StructuralError("self-loop edge on '" + a + "'");
        if (!declared.count(a) || !declared.count(b))
            throw StructuralError("edge references undeclared qubit");
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        if (!seen.insert(key).second) throw StructuralError("duplicate edge " + a + "-" + b);
        adj_[a].push_back(b);
        adj_[b].push_back(a);
    }
    for (auto& ng : native_) ng.name = to_lower(ng.name);
}

bool DeviceModel::has_qubit(const std::string& label) const { return adj_.count(label) > 0; }

bool DeviceModel::coupled(const std::string& a, const std::string& b) const {
    auto it = adj_.find(a);
    if (it == adj_.end()) return false;
    return std::find(it->second.begin(), it->second.end(), b) != it->second.end();
}

const std::vector<std::string>& DeviceModel::neighbors(const std::string& label) const {
    static const std::vector<std::string> empty;
    auto it = adj_.find(label);
    return it == adj_.end() ? empty : it->second;
}

bool DeviceModel::has_native(const std::string& name, int arity) const {
    const std::string n = to_lower(name);
    for (const auto& ng : native_) {
        if (ng.name == n && ng.arity == arity) return true;
    }
    return false;
}

bool DeviceModel::connected() const {
    if (qubits_.empty()) return true;
    std::set<std::string> seen{qubits_[0]};
    std::vector<std::string> frontier{qubits_[0]};
    while (!frontier.empty()) {
        std::string q = frontier.back();
        frontier.pop_back();
        for (const auto& nb : neighbors(q)) {
            if (seen.insert(nb).second) frontier.push_back(nb);
        }
    }
    return seen.size() == qubits_.size();
}

ValidationReport validate_compiled(const Circuit& c, const DeviceModel& dev) {
    ValidationReport report;
    for (const auto& q : c.qubits()) {
        if (!dev.has_qubit(q)) {
            report.violations.push_back({-1, Gate("", {q}), "qubit '" + q + "' not on device"});
        }
    }
    for (int li = 0; li < c.depth(); ++li) {
        for (const auto& g : c.layers()[li]) {
            const int arity = static_cast<int>(g.qubits.size());
            if (!dev.has_native(g.name, arity)) {
                report.violations.push_back({li, g, "non-native gate '" + g.name + "'"});
                continue;
            }
            if (arity >= 2) {
                for (int i = 0; i < arity; ++i) {
                    for (int j = i + 1; j < arity; ++j) {
                        if (!dev.coupled(g.qubits[i], g.qubits[j])) {
                            report.violations.push_back(
                                {li, g, "uncoupled pair " + g.qubits[i] + "," + g.qubits[j]});
                        }
                    }
                }
            }
        }
    }
    report.ok = report.violations.empty();
    return report;
}

ShapeInfo circuit_shape(const Circuit& c) {
    ShapeInfo s;
    s.width = c.width();
    s.depth = c.depth();
    s.quops = static_cast<long long>(s.width) * static_cast<long long>(s.depth);
    return s;
}

namespace {

Gate adjoint_gate(const Gate& g) {
    static const std::map<std::string, std::string> swapped = {
        {"s", "sdg"}, {"sdg", "s"}, {"t", "tdg"}, {"tdg", "t"}, {"sx", "sxdg"}, {"sxdg", "sx"}};
    static const std::set<std::string> self_adjoint = {"id", "x", "y", "z", "h", "cx", "cz",
                                                       "swap", "mcx", "mcy", "mcz"};
    static const std::set<std::string> negate_param = {"rx", "ry", "rz", "p", "mcry"};
    Gate out = g;
    if (self_adjoint.count(g.name)) return out;
    if (auto it = swapped.find(g.name); it != swapped.end()) {
        out.name = it->second;
        return out;
    }
    if (negate_param.count(g.name)) {
        out.params[0] = -out.params[0];
        return out;
    }
    throw InputError("no known inverse for gate '" + g.name + "'");
}

}  // namespace

Circuit adjoint(const Circuit& c) {
    std::vector<std::vector<Gate>> layers;
    layers.reserve(c.depth());
    for (auto it = c.layers().rbegin(); it != c.layers().rend(); ++it) {
        std::vector<Gate> layer;
        layer.reserve(it->size());
        for (const auto& g : *it) layer.push_back(adjoint_gate(g));
        layers.push_back(std::move(layer));
    }
    return Circuit(c.qubits(), std::move(layers));
}

Circuit concat(const Circuit& a, const Circuit& b) {
    std::vector<std::string> qubits = a.qubits();
    for (const auto& q : b.qubits()) {
        if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) qubits.push_back(q);
    }
    std::vector<std::vector<Gate>> layers = a.layers();
    layers.insert(layers.end(), b.layers().begin(), b.layers().end());
    return Circuit(std::move(qubits), std::move(layers));
}

bool semantically_equal(const Circuit& a, const Circuit& b, double param_tol) {
    if (a.qubits() != b.qubits() || a.depth() != b.depth()) return false;
    for (int li = 0; li < a.depth(); ++li) {
        const auto& la = a.layers()[li];
        const auto& lb = b.layers()[li];
        if (la.size() != lb.size()) return false;
        for (std::size_t gi = 0; gi < la.size(); ++gi) {
            if (la[gi].name != lb[gi].name || la[gi].qubits != lb[gi].qubits ||
                la[gi].params.size() != lb[gi].params.size())
                return false;
            for (std::size_t pi = 0; pi < la[gi].params.size(); ++pi) {
                if (std::abs(la[gi].params[pi] - lb[gi].params[pi]) > param_tol) return false;
            }
        }
    }
    return true;
}

}  // namespace svb
