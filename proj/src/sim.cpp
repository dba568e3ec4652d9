#include "svb/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "svb/dense.hpp"
#include "svb/io.hpp"
#include "svb/kernels.hpp"

namespace svb::sim {

namespace {

struct GatePlan {
    const Gate* gate;
    std::vector<int> idx;
};

struct CircuitPlan {
    int n = 0;
    std::vector<std::vector<GatePlan>> layer_gates;
    std::vector<std::vector<LocationChannel>> channels;  // [layer][qubit]
    bool any_noise = false;
};

CircuitPlan make_plan(const Circuit& c, const DeviceModel* dev, const NoiseModel& nm) {
    if (dev == nullptr && nm.gamma() != 0.0)
        throw InputError("crosstalk (gamma != 0) needs a device connectivity graph");
    CircuitPlan plan;
    plan.n = c.width();
    std::vector<int> neighbors(plan.n, 0);
    if (dev != nullptr) {
        auto counts = active_neighbor_counts(c, *dev);
        neighbors = counts;
    }
    plan.layer_gates.resize(c.depth());
    plan.channels.resize(c.depth());
    for (int li = 0; li < c.depth(); ++li) {
        for (const auto& g : c.layers()[li]) {
            GatePlan gp{&g, {}};
            for (const auto& q : g.qubits) gp.idx.push_back(c.qubit_index(q));
            plan.layer_gates[li].push_back(std::move(gp));
        }
        plan.channels[li].resize(plan.n);
        for (int k = 0; k < plan.n; ++k) {
            const Gate* g = c.gate_at(k, li);
            const std::string kind = g ? g->name : "idle";
            LocationChannel ch = nm.at(kind, c.qubits()[k], neighbors[k]);
            plan.channels[li][k] = ch;
            if (ch.theta != 0.0 || ch.dep > 0.0 || ch.px + ch.py + ch.pz > 0.0) plan.any_noise = true;
        }
    }
    return plan;
}

}  // namespace

std::vector<int> active_neighbor_counts(const Circuit& c, const DeviceModel& dev) {
    std::vector<int> counts(c.width(), 0);
    for (int k = 0; k < c.width(); ++k) {
        const std::string& q = c.qubits()[k];
        if (!dev.has_qubit(q)) continue;
        int a = 0;
        for (const auto& nb : dev.neighbors(q)) {
            if (c.qubit_index(nb) >= 0) ++a;
        }
        counts[k] = a;
    }
    return counts;
}

namespace {

double exact_impl(const Circuit& c, const DeviceModel* dev, const NoiseModel& nm, int max_width) {
    const int n = c.width();
    if (n > max_width)
        throw CapacityError("exact fidelity limited to " + std::to_string(max_width) +
                            " qubits, circuit has " + std::to_string(n));
    if (n == 0) return 1.0;
    const CircuitPlan plan = make_plan(c, dev, nm);
    const std::size_t n_paulis = std::size_t{1} << (2 * n);
    const double dim = static_cast<double>(std::size_t{1} << n);

    dense::Vec rho, ideal, scratch;
    double f_sum = 0.0;
    for (std::size_t p = 0; p < n_paulis; ++p) {
        dense::dm_init_pauli(rho, n, p);
        ideal = rho;
        for (const auto& layer : plan.layer_gates) {
            for (const auto& gp : layer) dense::dm_apply_gate(ideal, n, *gp.gate, gp.idx);
        }
        for (int li = 0; li < static_cast<int>(plan.layer_gates.size()); ++li) {
            for (const auto& gp : plan.layer_gates[li]) dense::dm_apply_gate(rho, n, *gp.gate, gp.idx);
            for (int k = 0; k < n; ++k) {
                const LocationChannel& ch = plan.channels[li][k];
                if (ch.theta != 0.0) dense::dm_apply_rz(rho, n, k, ch.theta);
                if (ch.dep > 0.0)
                    dense::dm_apply_pauli_channel(rho, scratch, n, k, ch.dep / 3.0, ch.dep / 3.0,
                                                  ch.dep / 3.0);
                if (ch.px + ch.py + ch.pz > 0.0)
                    dense::dm_apply_pauli_channel(rho, scratch, n, k, ch.px, ch.py, ch.pz);
            }
        }
        f_sum += dense::dm_hs_inner(ideal, rho).real() / dim;
    }
    return std::clamp(f_sum / static_cast<double>(n_paulis), 0.0, 1.0);
}

struct Fault {
    int qubit;
    char pauli;  // 'x','y','z'
};

dense::Vec haar_state(int n, Rng& rng) {
    dense::Vec v(std::size_t{1} << n);
    double norm2 = 0.0;
    for (auto& amp : v) {
        amp = cplx(rng.normal(), rng.normal());
        norm2 += std::norm(amp);
    }
    kernels::active().scale(v.data(), cplx(1.0 / std::sqrt(norm2)), v.size());
    return v;
}

McEstimate mc_impl(const Circuit& c, const DeviceModel* dev, const NoiseModel& nm, int fault_samples,
                   int state_samples, Rng& rng, int max_width) {
    const int n = c.width();
    if (n > max_width)
        throw CapacityError("mc fidelity limited to " + std::to_string(max_width) +
                            " qubits, circuit has " + std::to_string(n));
    if (fault_samples < 1 || state_samples < 1) throw InputError("sample counts must be >= 1");
    if (n == 0) return {1.0, 0.0};
    const CircuitPlan plan = make_plan(c, dev, nm);
    const int depth = static_cast<int>(plan.layer_gates.size());

    const Gate rz_gate("rz", {"q"}, {0.0});  // template; params set per location

    auto propagate = [&](dense::Vec& v, const std::vector<std::vector<Fault>>* faults) {
        for (int li = 0; li < depth; ++li) {
            for (const auto& gp : plan.layer_gates[li]) dense::apply_gate(v, n, *gp.gate, gp.idx);
            for (int k = 0; k < n; ++k) {
                const double th = plan.channels[li][k].theta;
                if (th != 0.0) {
                    Gate g = rz_gate;
                    g.params[0] = th;
                    dense::apply_gate(v, n, g, {k});
                }
            }
            if (faults) {
                for (const auto& f : (*faults)[li]) {
                    dense::apply_gate(v, n, Gate(std::string(1, f.pauli), {"q"}), {f.qubit});
                }
            }
        }
    };

    std::vector<double> per_fault(fault_samples, 0.0);
    std::vector<std::vector<Fault>> faults(depth);
    for (int s = 0; s < fault_samples; ++s) {
        for (auto& layer : faults) layer.clear();
        for (int li = 0; li < depth; ++li) {
            for (int k = 0; k < n; ++k) {
                const LocationChannel& ch = plan.channels[li][k];
                if (ch.dep > 0.0 && rng.uniform() < ch.dep) {
                    faults[li].push_back({k, "xyz"[rng.uniform_index(3)]});
                }
                const double pt = ch.px + ch.py + ch.pz;
                if (pt > 0.0) {
                    const double r = rng.uniform();
                    if (r < ch.px) faults[li].push_back({k, 'x'});
                    else if (r < ch.px + ch.py) faults[li].push_back({k, 'y'});
                    else if (r < pt) faults[li].push_back({k, 'z'});
                }
            }
        }
        double acc = 0.0;
        for (int t = 0; t < state_samples; ++t) {
            cplx x[2];
            for (int side = 0; side < 2; ++side) {
                dense::Vec phi = haar_state(n, rng);
                dense::Vec noisy = phi;
                propagate(phi, nullptr);  // ideal (coherent part belongs to the noisy path)
                propagate(noisy, &faults);
                x[side] = kernels::active().cdot(phi.data(), noisy.data(), phi.size());
            }
            acc += (x[0] * std::conj(x[1])).real();
        }
        per_fault[s] = acc / state_samples;
    }
    McEstimate est;
    for (double v : per_fault) est.f += v;
    est.f /= fault_samples;
    if (fault_samples > 1) {
        double ss = 0.0;
        for (double v : per_fault) ss += (v - est.f) * (v - est.f);
        est.stderr_f = std::sqrt(ss / (static_cast<double>(fault_samples) *
                                       static_cast<double>(fault_samples - 1)));
    }
    return est;
}

}  // namespace

double exact_process_fidelity(const Circuit& c, const DeviceModel& dev, const NoiseModel& nm,
                              int max_width) {
    return exact_impl(c, &dev, nm, max_width);
}

double exact_process_fidelity(const Circuit& c, const NoiseModel& nm, int max_width) {
    return exact_impl(c, nullptr, nm, max_width);
}

McEstimate mc_process_fidelity(const Circuit& c, const DeviceModel& dev, const NoiseModel& nm,
                               int fault_samples, int state_samples, Rng& rng, int max_width) {
    return mc_impl(c, &dev, nm, fault_samples, state_samples, rng, max_width);
}

McEstimate mc_process_fidelity(const Circuit& c, const NoiseModel& nm, int fault_samples,
                               int state_samples, Rng& rng, int max_width) {
    return mc_impl(c, nullptr, nm, fault_samples, state_samples, rng, max_width);
}

namespace {

double zero_fault_impl(const Circuit& c, const DeviceModel* dev, const NoiseModel& nm) {
    if (nm.has_coherent())
        throw UnsupportedModelError("zero-fault product requires purely stochastic channels");
    const CircuitPlan plan = make_plan(c, dev, nm);
    double log_f = 0.0;
    for (const auto& layer : plan.channels) {
        for (const auto& ch : layer) {
            log_f += std::log1p(-ch.dep) + std::log1p(-(ch.px + ch.py + ch.pz));
        }
    }
    return std::exp(log_f);
}

}  // namespace

double zero_fault_bound(const Circuit& c, const DeviceModel& dev, const NoiseModel& nm) {
    return zero_fault_impl(c, &dev, nm);
}

double zero_fault_bound(const Circuit& c, const NoiseModel& nm) {
    return zero_fault_impl(c, nullptr, nm);
}

std::vector<FidelityRecord> run_snippet_batch(const std::vector<snip::Snippet>& snippets,
                                              const DeviceModel& proto, const NoiseModel& nm,
                                              const SimBudget& budget, std::uint64_t seed) {
    std::vector<FidelityRecord> records;
    records.reserve(snippets.size());
    for (std::size_t i = 0; i < snippets.size(); ++i) {
        const auto& s = snippets[i];
        FidelityRecord rec;
        rec.w = s.shape.w;
        rec.d = s.shape.d;
        rec.k = s.index;
        rec.dropped_frac = dropped_gate_fraction(s);
        try {
            const int w = s.circuit.width();
            if (w <= budget.exact_max_width) {
                rec.f = exact_process_fidelity(s.circuit, proto, nm, budget.exact_max_width);
                rec.method = "exact";
            } else if (w <= budget.mc_max_width) {
                Rng rng(derive_seed(seed, i));
                const McEstimate est = mc_process_fidelity(s.circuit, proto, nm, budget.fault_samples,
                                                           budget.state_samples, rng,
                                                           budget.mc_max_width);
                rec.f = est.f;
                rec.stderr_f = est.stderr_f;
                rec.method = "mc";
            } else {
                throw CapacityError("snippet width " + std::to_string(w) + " exceeds mc capacity " +
                                    std::to_string(budget.mc_max_width));
            }
        } catch (const Error& e) {
            rec.failed = true;
            rec.error = e.what();
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::string record_to_json_line(const FidelityRecord& rec) {
    io::json j;
    j["w"] = rec.w;
    j["d"] = rec.d;
    j["k"] = rec.k;
    if (rec.failed) {
        j["failed"] = true;
        j["error"] = rec.error;
        return j.dump();
    }
    j["F"] = rec.f;
    j["stderr"] = rec.stderr_f;
    j["method"] = rec.method;
    j["dropped_frac"] = rec.dropped_frac;
    return j.dump();
}

std::string records_to_jsonl(const std::vector<FidelityRecord>& recs) {
    std::string out;
    for (const auto& r : recs) {
        out += record_to_json_line(r);
        out += '\n';
    }
    return out;
}

std::vector<FidelityRecord> parse_records_jsonl(const std::string& text) {
    std::vector<FidelityRecord> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        io::json j;
        try {
            j = io::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("records line " + std::to_string(line_no) + ": " + e.what());
        }
        FidelityRecord rec;
        rec.w = j.at("w").get<int>();
        rec.d = j.at("d").get<int>();
        rec.k = j.value("k", 0);
        if (j.value("failed", false)) {
            rec.failed = true;
            rec.error = j.value("error", "");
        } else {
            rec.f = j.at("F").get<double>();
            rec.stderr_f = j.value("stderr", 0.0);
            rec.method = j.value("method", "external");
            rec.dropped_frac = j.value("dropped_frac", 0.0);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace svb::sim
