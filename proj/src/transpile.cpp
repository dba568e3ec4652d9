#include "svb/transpile.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "svb/dense.hpp"
#include "svb/rng.hpp"

namespace svb::transpile {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a > kPi) a -= 2.0 * kPi;
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

struct Euler {  // U = e^{i phase} * u3(theta, phi, lam)
    double theta, phi, lam, phase;
};

Euler u3_angles(const std::array<cplx, 4>& u) {
    const double a00 = std::abs(u[0]);
    const double a10 = std::abs(u[2]);
    Euler e{};
    if (a10 < 1e-12) {
        e.theta = 0.0;
        e.lam = 0.0;
        e.phase = std::arg(u[0]);
        e.phi = std::arg(u[3] * std::conj(u[0]));
    } else if (a00 < 1e-12) {
        e.theta = kPi;
        e.lam = 0.0;
        e.phase = std::arg(-u[1]);
        e.phi = std::arg(u[2]) - e.phase;
    } else {
        e.theta = 2.0 * std::atan2(a10, a00);
        e.phase = std::arg(u[0]);
        e.phi = std::arg(u[2]) - e.phase;
        e.lam = std::arg(-u[1]) - e.phase;
    }
    return e;
}

class Emitter {
public:
    explicit Emitter(double tol) : tol_(tol) {}

    std::vector<Gate> take() { return std::move(out_); }

    void gate(const Gate& g) {
        if (g.name == "cx" || g.name == "rz" || g.name == "sx") {
            out_.push_back(g);
            return;
        }
        if (g.name == "id") return;
        const int arity = static_cast<int>(g.qubits.size());
        if (arity == 1) {
            native_1q(dense::gate_matrix_1q(g.name, g.params), g.qubits[0]);
            return;
        }
        if (g.name == "cz") {
            h(g.qubits[1]);
            cx(g.qubits[0], g.qubits[1]);
            h(g.qubits[1]);
            return;
        }
        if (g.name == "swap") {
            cx(g.qubits[0], g.qubits[1]);
            cx(g.qubits[1], g.qubits[0]);
            cx(g.qubits[0], g.qubits[1]);
            return;
        }
        if (g.name == "mcx" || g.name == "mcy" || g.name == "mcz") {
            std::vector<std::string> ctrls(g.qubits.begin(), g.qubits.end() - 1);
            const std::string& t = g.qubits.back();
            if (g.name == "mcy") native_1q(dense::gate_matrix_1q("sdg", {}), t);
            if (g.name == "mcz") h(t);
            mc_xpow(ctrls, t, 1.0);
            if (g.name == "mcy") native_1q(dense::gate_matrix_1q("s", {}), t);
            if (g.name == "mcz") h(t);
            return;
        }
        if (g.name == "mcry") {
            std::vector<std::string> ctrls(g.qubits.begin(), g.qubits.end() - 1);
            const std::string& t = g.qubits.back();
            const double th = g.params.at(0);
            mc_xpow(ctrls, t, 1.0);
            ry(-th / 2.0, t);
            mc_xpow(ctrls, t, 1.0);
            ry(th / 2.0, t);
            return;
        }
        throw InputError("unsupported gate '" + g.name + "' (arity " + std::to_string(arity) + ")");
    }

private:
    void cx(const std::string& c, const std::string& t) { out_.push_back(Gate("cx", {c, t})); }
    void rz(double a, const std::string& q) {
        a = wrap_angle(a);
        if (std::abs(a) > tol_) out_.push_back(Gate("rz", {q}, {a}));
    }
    void sx(const std::string& q) { out_.push_back(Gate("sx", {q})); }
    void h(const std::string& q) { native_1q(dense::gate_matrix_1q("h", {}), q); }
    void ry(double a, const std::string& q) { native_1q(dense::gate_matrix_1q("ry", {a}), q); }

    // zxzxz: U ~ rz(phi+pi) . sx . rz(theta+pi) . sx . rz(lam)
    void native_1q(const std::array<cplx, 4>& u, const std::string& q) {
        const Euler e = u3_angles(u);
        if (std::abs(e.theta) <= tol_) {
            rz(e.phi + e.lam, q);
            return;
        }
        rz(e.lam, q);
        sx(q);
        rz(e.theta + kPi, q);
        sx(q);
        rz(e.phi + kPi, q);
    }

    // canonical 15-gate Toffoli (6 cx)
    void toffoli(const std::string& a, const std::string& b, const std::string& c) {
        h(c);
        cx(b, c);
        tdg(c);
        cx(a, c);
        t(c);
        cx(b, c);
        tdg(c);
        cx(a, c);
        t(b);
        t(c);
        h(c);
        cx(a, b);
        t(a);
        tdg(b);
        cx(a, b);
    }
    void t(const std::string& q) { rz(kPi / 4.0, q); }
    void tdg(const std::string& q) { rz(-kPi / 4.0, q); }

    // controlled X^s, exact including the relative phase:
    // X^s = e^{i pi s/2} Rz(-pi/2) Ry(pi s) Rz(pi/2)
    void c_xpow(const std::string& c, const std::string& t_q, double s) {
        const double alpha = kPi * s / 2.0;
        const double beta = -kPi / 2.0, gamma = kPi * s, delta = kPi / 2.0;
        rz((delta - beta) / 2.0, t_q);
        cx(c, t_q);
        rz(-(delta + beta) / 2.0, t_q);
        ry(-gamma / 2.0, t_q);
        cx(c, t_q);
        ry(gamma / 2.0, t_q);
        rz(beta, t_q);
        rz(alpha, c);  // p(alpha) up to global phase
    }

    // C^k(X^s) via the no-ancilla square-root recursion
    void mc_xpow(const std::vector<std::string>& ctrls, const std::string& t_q, double s) {
        const std::size_t k = ctrls.size();
        if (k == 0) {
            native_1q(xpow_matrix(s), t_q);
            return;
        }
        if (k == 1) {
            if (s == 1.0) {
                cx(ctrls[0], t_q);
            } else {
                c_xpow(ctrls[0], t_q, s);
            }
            return;
        }
        if (k == 2 && s == 1.0) {
            toffoli(ctrls[0], ctrls[1], t_q);
            return;
        }
        const std::vector<std::string> rest(ctrls.begin(), ctrls.end() - 1);
        const std::string& last = ctrls.back();
        c_xpow(last, t_q, s / 2.0);
        mc_xpow(rest, last, 1.0);
        c_xpow(last, t_q, -s / 2.0);
        mc_xpow(rest, last, 1.0);
        mc_xpow(rest, t_q, s / 2.0);
    }

    static std::array<cplx, 4> xpow_matrix(double s) {
        const cplx ph = std::exp(cplx(0.0, kPi * s / 2.0));
        const double c = std::cos(kPi * s / 2.0);
        const cplx ms(0.0, -std::sin(kPi * s / 2.0));
        return {ph * c, ph * ms, ph * ms, ph * c};
    }

    double tol_;
    std::vector<Gate> out_;
};

std::vector<Gate> flatten(const Circuit& c) {
    std::vector<Gate> out;
    for (const auto& layer : c.layers()) out.insert(out.end(), layer.begin(), layer.end());
    return out;
}

Circuit serial_circuit(std::vector<std::string> qubits, const std::vector<Gate>& gates) {
    std::vector<std::vector<Gate>> layers;
    layers.reserve(gates.size());
    for (const auto& g : gates) layers.push_back({g});
    return Circuit(std::move(qubits), std::move(layers));
}

}  // namespace

Circuit decompose_to_native(const Circuit& c, const GateSetTarget& target) {
    Emitter em(target.tolerance);
    for (const auto& g : flatten(c)) em.gate(g);
    return serial_circuit(c.qubits(), em.take());
}

namespace {

std::vector<std::string> bfs_path(const DeviceModel& dev, const std::string& from,
                                  const std::string& to, Rng& rng) {
    std::map<std::string, std::string> parent;
    parent[from] = from;
    std::deque<std::string> frontier{from};
    while (!frontier.empty()) {
        const std::string cur = frontier.front();
        frontier.pop_front();
        if (cur == to) break;
        std::vector<std::string> nbs = dev.neighbors(cur);
        for (std::size_t i = nbs.size(); i > 1; --i) {  // seeded tie-breaking
            std::swap(nbs[i - 1], nbs[rng.uniform_index(i)]);
        }
        for (const auto& nb : nbs) {
            if (!parent.count(nb)) {
                parent[nb] = cur;
                frontier.push_back(nb);
            }
        }
    }
    if (!parent.count(to)) throw EmbeddingError("device graph disconnected between " + from + " and " + to);
    std::vector<std::string> path{to};
    while (path.back() != from) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

RouteResult place_and_route(const Circuit& c, const DeviceModel& dev, std::uint64_t seed) {
    if (c.width() > static_cast<int>(dev.qubits().size()))
        throw CapacityError("circuit width " + std::to_string(c.width()) + " exceeds device size " +
                            std::to_string(dev.qubits().size()));
    if (!dev.connected()) throw InputError("device graph must be connected for routing");

    Rng rng(seed);
    RouteResult res;
    std::map<std::string, std::string> pos;       // circuit qubit -> device qubit
    std::map<std::string, std::string> occupant;  // device qubit -> circuit qubit
    for (int i = 0; i < c.width(); ++i) {
        pos[c.qubits()[i]] = dev.qubits()[i];
        occupant[dev.qubits()[i]] = c.qubits()[i];
    }
    res.initial_layout = pos;

    std::vector<Gate> out;
    auto emit_swap = [&](const std::string& u, const std::string& v) {
        out.push_back(Gate("cx", {u, v}));
        out.push_back(Gate("cx", {v, u}));
        out.push_back(Gate("cx", {u, v}));
        const std::string cu = occupant.count(u) ? occupant[u] : "";
        const std::string cv = occupant.count(v) ? occupant[v] : "";
        occupant.erase(u);
        occupant.erase(v);
        if (!cv.empty()) {
            occupant[u] = cv;
            pos[cv] = u;
        }
        if (!cu.empty()) {
            occupant[v] = cu;
            pos[cu] = v;
        }
        ++res.inserted_swaps;
    };

    for (const auto& g : flatten(c)) {
        const int arity = static_cast<int>(g.qubits.size());
        if (arity == 1) {
            out.push_back(Gate(g.name, {pos[g.qubits[0]]}, g.params));
        } else if (arity == 2) {
            if (!dev.coupled(pos[g.qubits[0]], pos[g.qubits[1]])) {
                const auto path = bfs_path(dev, pos[g.qubits[0]], pos[g.qubits[1]], rng);
                for (std::size_t i = 1; i + 1 < path.size(); ++i) emit_swap(path[i - 1], path[i]);
            }
            out.push_back(Gate(g.name, {pos[g.qubits[0]], pos[g.qubits[1]]}, g.params));
        } else {
            throw InputError("routing requires arity <= 2; decompose '" + g.name + "' first");
        }
    }
    res.final_permutation = pos;
    res.circuit = serial_circuit(dev.qubits(), out);
    return res;
}

Circuit layerize(const Circuit& c) {
    std::map<std::string, int> busy;
    for (const auto& q : c.qubits()) busy[q] = -1;
    std::vector<std::vector<Gate>> layers;
    for (const auto& g : flatten(c)) {
        int place = 0;
        for (const auto& q : g.qubits) place = std::max(place, busy[q] + 1);
        if (place >= static_cast<int>(layers.size())) layers.resize(place + 1);
        layers[place].push_back(g);
        for (const auto& q : g.qubits) busy[q] = place;
    }
    return Circuit(c.qubits(), std::move(layers));
}

RouteResult transpile_circuit(const Circuit& c, const DeviceModel& dev, std::uint64_t seed,
                              const GateSetTarget& target) {
    RouteResult res = place_and_route(decompose_to_native(c, target), dev, seed);
    res.circuit = layerize(res.circuit);
    return res;
}

}  // namespace svb::transpile
