#include "svb/noise.hpp"

#include <cmath>

#include "svb/io.hpp"

namespace svb::sim {

namespace {

constexpr double kClamp = 1.0 - 1e-12;

void check_rule(const NoiseRule& r) {
    for (double p : {r.px, r.py, r.pz}) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("pauli probabilities must be >= 0");
    }
    if (r.px + r.py + r.pz > 1.0) throw InputError("px+py+pz must be <= 1");
    if (!(r.dep >= 0.0) || r.dep >= 1.0) throw InputError("dep must lie in [0,1)");
    if (!std::isfinite(r.theta)) throw InputError("theta must be finite");
}

}  // namespace

NoiseModel::NoiseModel(std::vector<NoiseRule> rules, double gamma)
    : rules_(std::move(rules)), gamma_(gamma) {
    if (!(gamma_ >= 0.0) || !std::isfinite(gamma_)) throw InputError("gamma must be >= 0");
    for (auto& r : rules_) {
        r.kind = to_lower(r.kind);
        check_rule(r);
    }
}

bool NoiseModel::has_coherent() const {
    for (const auto& r : rules_) {
        if (r.theta != 0.0) return true;
    }
    return false;
}

const NoiseRule* NoiseModel::match(const std::string& kind, const std::string& qubit) const {
    const NoiseRule* best = nullptr;
    int best_rank = -1;
    for (const auto& r : rules_) {
        if (r.kind != "*" && r.kind != kind) continue;
        if (r.qubit != "*" && r.qubit != qubit) continue;
        const int rank = (r.kind != "*" ? 2 : 0) + (r.qubit != "*" ? 1 : 0);
        if (rank > best_rank) {
            best_rank = rank;
            best = &r;
        }
    }
    return best;
}

LocationChannel NoiseModel::at(const std::string& kind, const std::string& qubit,
                               int active_neighbors) const {
    LocationChannel ch;
    const NoiseRule* r = match(kind, qubit);
    if (!r) return ch;
    const double scale = 1.0 + gamma_ * static_cast<double>(active_neighbors);
    ch.px = r->px * scale;
    ch.py = r->py * scale;
    ch.pz = r->pz * scale;
    const double pt = ch.px + ch.py + ch.pz;
    if (pt > kClamp) {
        const double f = kClamp / pt;
        ch.px *= f;
        ch.py *= f;
        ch.pz *= f;
    }
    ch.dep = std::min(r->dep * scale, kClamp);
    ch.theta = r->theta;
    return ch;
}

NoiseModel noise_model_from_json_text(const std::string& text) {
    io::json j;
    try {
        j = io::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), e.byte);
    }
    double gamma = j.value("gamma", 0.0);
    std::vector<NoiseRule> rules;
    if (j.contains("rules")) {
        for (const auto& jr : j.at("rules")) {
            NoiseRule r;
            r.kind = jr.value("kind", "*");
            r.qubit = jr.value("qubit", "*");
            r.px = jr.value("px", 0.0);
            r.py = jr.value("py", 0.0);
            r.pz = jr.value("pz", 0.0);
            r.dep = jr.value("dep", 0.0);
            r.theta = jr.value("theta", 0.0);
            rules.push_back(std::move(r));
        }
    }
    return NoiseModel(std::move(rules), gamma);
}

std::string noise_model_to_json_text(const NoiseModel& nm) {
    io::json j;
    j["gamma"] = nm.gamma();
    io::json rules = io::json::array();
    for (const auto& r : nm.rules()) {
        io::json jr;
        jr["kind"] = r.kind;
        jr["qubit"] = r.qubit;
        if (r.px != 0.0) jr["px"] = r.px;
        if (r.py != 0.0) jr["py"] = r.py;
        if (r.pz != 0.0) jr["pz"] = r.pz;
        if (r.dep != 0.0) jr["dep"] = r.dep;
        if (r.theta != 0.0) jr["theta"] = r.theta;
        rules.push_back(std::move(jr));
    }
    j["rules"] = std::move(rules);
    return j.dump(2) + "\n";
}

NoiseModel load_noise_model(const std::string& path) {
    return noise_model_from_json_text(io::read_text(path));
}

}  // namespace svb::sim
