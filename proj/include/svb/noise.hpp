#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svb/circuit.hpp"
#include "svb/common.hpp"

namespace svb::sim {

/// One per-location error rule. kind is a lowercase gate name, "idle", or "*";
/// qubit is a label or "*". px/py/pz are Pauli fault probabilities, dep is a
/// depolarizing channel parameterized directly by its process infidelity, and
/// theta is a coherent z-overrotation angle.
struct NoiseRule {
    std::string kind = "*";
    std::string qubit = "*";
    double px = 0.0, py = 0.0, pz = 0.0;
    double dep = 0.0;
    double theta = 0.0;
};

/// Crosstalk-scaled channel at one (qubit, layer) location. All stochastic
/// rates are pre-clamped below 1.
struct LocationChannel {
    double px = 0.0, py = 0.0, pz = 0.0;
    double dep = 0.0;
    double theta = 0.0;

    bool stochastic_only() const { return theta == 0.0; }
    /// Probability that the location faults at all: 1 - (1-dep)(1-px-py-pz).
    double total_error_prob() const { return 1.0 - (1.0 - dep) * (1.0 - px - py - pz); }
};

class NoiseModel {
public:
    NoiseModel() = default;
    NoiseModel(std::vector<NoiseRule> rules, double gamma);

    double gamma() const { return gamma_; }
    const std::vector<NoiseRule>& rules() const { return rules_; }
    bool has_coherent() const;

    /// Most specific matching rule: (kind,qubit) > (kind,*) > (*,qubit) > (*,*).
    const NoiseRule* match(const std::string& kind, const std::string& qubit) const;

    /// Effective channel with the crosstalk multiplier 1 + gamma * neighbors
    /// applied to the stochastic rates (clamped below 1).
    LocationChannel at(const std::string& kind, const std::string& qubit, int active_neighbors) const;

private:
    std::vector<NoiseRule> rules_;
    double gamma_ = 0.0;
};

NoiseModel noise_model_from_json_text(const std::string& text);
std::string noise_model_to_json_text(const NoiseModel& nm);
NoiseModel load_noise_model(const std::string& path);

}  // namespace svb::sim
