#include "svb/snip.hpp"

#include <algorithm>
#include <set>

namespace svb::snip {

GrowthRule growth_rule_from_string(const std::string& s) {
    if (s == "qubit_uniform") return GrowthRule::qubit_uniform;
    if (s == "edge_uniform") return GrowthRule::edge_uniform;
    throw InputError("growth rule must be 'qubit_uniform' or 'edge_uniform', got '" + s + "'");
}

int sample_layer_window(const Circuit& c, int d, Rng& rng) {
    if (d < 1) throw ShapeError("window depth must be >= 1");
    if (d > c.depth())
        throw ShapeError("window depth " + std::to_string(d) + " exceeds circuit depth " +
                         std::to_string(c.depth()));
    return static_cast<int>(rng.uniform_index(static_cast<std::size_t>(c.depth() - d + 1)));
}

std::vector<std::string> sample_qubit_subset(const DeviceModel& dev,
                                             const std::vector<std::string>& eligible, int w, Rng& rng,
                                             GrowthRule rule) {
    if (w < 1) throw ShapeError("subset width must be >= 1");
    if (w > static_cast<int>(eligible.size()))
        throw ShapeError("need " + std::to_string(w) + " qubits, only " +
                         std::to_string(eligible.size()) + " eligible");
    const std::set<std::string> pool(eligible.begin(), eligible.end());
    std::vector<std::string> chosen{eligible[rng.uniform_index(eligible.size())]};
    std::set<std::string> in_set{chosen[0]};
    while (static_cast<int>(chosen.size()) < w) {
        if (rule == GrowthRule::qubit_uniform) {
            std::vector<std::string> frontier;  // distinct neighbors, eligible order
            for (const auto& q : eligible) {
                if (in_set.count(q)) continue;
                bool touches = false;
                for (const auto& member : chosen) {
                    if (dev.coupled(member, q)) {
                        touches = true;
                        break;
                    }
                }
                if (touches) frontier.push_back(q);
            }
            if (frontier.empty()) throw ShapeError("eligible subset is not connected enough");
            const std::string& pick = frontier[rng.uniform_index(frontier.size())];
            chosen.push_back(pick);
            in_set.insert(pick);
        } else {
            std::vector<std::string> boundary;  // one entry per crossing edge
            for (const auto& member : chosen) {
                for (const auto& nb : dev.neighbors(member)) {
                    if (!in_set.count(nb) && pool.count(nb)) boundary.push_back(nb);
                }
            }
            if (boundary.empty()) throw ShapeError("eligible subset is not connected enough");
            const std::string& pick = boundary[rng.uniform_index(boundary.size())];
            chosen.push_back(pick);
            in_set.insert(pick);
        }
    }
    return chosen;
}

namespace {

bool same_graph(const DeviceModel& a, const DeviceModel& b) {
    if (a.qubits() != b.qubits()) return false;
    auto norm = [](const DeviceModel& d) {
        std::set<std::pair<std::string, std::string>> es;
        for (const auto& [x, y] : d.edges()) es.insert(x < y ? std::make_pair(x, y) : std::make_pair(y, x));
        return es;
    };
    return norm(a) == norm(b);
}

struct EmbedSearch {
    const DeviceModel& dev;
    const DeviceModel& proto;
    const std::vector<std::string>& order;  // proto qubits, BFS order
    Rng& rng;
    std::map<std::string, std::string> assignment;
    std::set<std::string> used;
    int budget = 0;

    bool consistent(const std::string& p, const std::string& cand) const {
        for (const auto& [q, dq] : assignment) {
            if (proto.coupled(p, q) != dev.coupled(cand, dq)) return false;
        }
        return true;
    }

    bool extend(std::size_t i) {
        if (i == order.size()) return true;
        if (--budget < 0) return false;
        const std::string& p = order[i];
        std::vector<std::string> candidates;
        std::string parent;
        for (std::size_t j = 0; j < i; ++j) {
            if (proto.coupled(p, order[j])) {
                parent = order[j];
                break;
            }
        }
        if (!parent.empty()) {
            for (const auto& nb : dev.neighbors(assignment.at(parent))) {
                if (!used.count(nb)) candidates.push_back(nb);
            }
        } else {
            for (const auto& q : dev.qubits()) {
                if (!used.count(q)) candidates.push_back(q);
            }
        }
        for (std::size_t j = candidates.size(); j > 1; --j) {
            std::swap(candidates[j - 1], candidates[rng.uniform_index(j)]);
        }
        for (const auto& cand : candidates) {
            if (!consistent(p, cand)) continue;
            assignment[p] = cand;
            used.insert(cand);
            if (extend(i + 1)) return true;
            assignment.erase(p);
            used.erase(cand);
        }
        return false;
    }
};

std::vector<std::string> bfs_order(const DeviceModel& proto) {
    std::vector<std::string> order;
    std::set<std::string> seen;
    for (const auto& root : proto.qubits()) {
        if (seen.count(root)) continue;
        std::vector<std::string> queue{root};
        seen.insert(root);
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            order.push_back(queue[qi]);
            for (const auto& nb : proto.neighbors(queue[qi])) {
                if (seen.insert(nb).second) queue.push_back(nb);
            }
        }
    }
    return order;
}

}  // namespace

std::map<std::string, std::string> sample_equivalent_subset(const DeviceModel& dev,
                                                            const DeviceModel& proto, Rng& rng) {
    if (proto.qubits().size() > dev.qubits().size())
        throw EmbeddingError("prototype has more qubits than the target device");
    for (const auto& ng : dev.native_gates()) {
        if (!proto.has_native(ng.name, ng.arity))
            throw EmbeddingError("prototype does not offer native gate '" + ng.name + "'");
    }
    if (same_graph(dev, proto)) {
        std::map<std::string, std::string> identity;
        for (const auto& q : proto.qubits()) identity[q] = q;
        return identity;
    }
    const auto order = bfs_order(proto);
    for (int attempt = 0; attempt < 64; ++attempt) {
        EmbedSearch search{dev, proto, order, rng, {}, {}, 20000};
        if (search.extend(0)) return search.assignment;
    }
    throw EmbeddingError("no subset of the device is equivalent to the prototype");
}

Snippet sample_snippet(const Circuit& c, const DeviceModel& dev, const DeviceModel& proto, Shape shape,
                       Rng& rng, GrowthRule rule) {
    if (shape.w < 1 || shape.d < 1) throw ShapeError("shape must be >= (1,1)");
    if (shape.w > c.width()) throw ShapeError("shape width exceeds target width");
    if (shape.w > static_cast<int>(proto.qubits().size()))
        throw ShapeError("shape width exceeds prototype size");

    const int start = sample_layer_window(c, shape.d, rng);

    ShapeError last_err("");
    for (int attempt = 0; attempt < 8; ++attempt) {
        const auto embed = sample_equivalent_subset(dev, proto, rng);  // proto -> dev
        std::map<std::string, std::string> to_proto;                   // dev -> proto
        std::vector<std::string> eligible;                             // dev labels, proto order
        for (const auto& p : proto.qubits()) {
            const std::string& dq = embed.at(p);
            to_proto[dq] = p;
            if (c.qubit_index(dq) >= 0) eligible.push_back(dq);
        }
        try {
            const auto q_w = sample_qubit_subset(dev, eligible, shape.w, rng, rule);
            const std::set<std::string> in_set(q_w.begin(), q_w.end());

            Snippet s;
            s.shape = shape;
            s.start_layer = start;
            // canonical qubit order: prototype declaration order
            for (const auto& p : proto.qubits()) {
                const std::string& dq = embed.at(p);
                if (in_set.count(dq)) {
                    s.qubit_set.push_back(dq);
                    s.relabeling[dq] = p;
                }
            }
            std::vector<std::string> snip_qubits;
            for (const auto& dq : s.qubit_set) snip_qubits.push_back(to_proto.at(dq));

            std::vector<std::vector<Gate>> layers;
            int retained = 0;
            for (int li = start; li < start + shape.d; ++li) {
                std::vector<Gate> layer;
                for (const auto& g : c.layers()[li]) {
                    int inside = 0;
                    for (const auto& q : g.qubits) inside += in_set.count(q) ? 1 : 0;
                    if (inside == 0) continue;
                    if (inside == static_cast<int>(g.qubits.size())) {
                        Gate relabeled = g;
                        for (auto& q : relabeled.qubits) q = to_proto.at(q);
                        layer.push_back(std::move(relabeled));
                        ++retained;
                    } else {
                        ++s.dropped_gates;  // multi-qubit gate crossing the boundary
                    }
                }
                layers.push_back(std::move(layer));
            }
            s.total_boundary_gates = retained + s.dropped_gates;
            s.circuit = Circuit(std::move(snip_qubits), std::move(layers));
            return s;
        } catch (const ShapeError& e) {
            last_err = e;  // embedding landed outside the target's qubits; retry
        }
    }
    throw last_err;
}

double dropped_gate_fraction(const Snippet& s) {
    if (s.total_boundary_gates == 0) return 0.0;
    return static_cast<double>(s.dropped_gates) / static_cast<double>(s.total_boundary_gates);
}

std::vector<Snippet> sample_snippets(const Circuit& c, const DeviceModel& dev,
                                     const DeviceModel& proto, const std::vector<Shape>& shapes,
                                     int k_per_shape, std::uint64_t seed, GrowthRule rule) {
    std::vector<Snippet> out;
    for (std::size_t si = 0; si < shapes.size(); ++si) {
        for (int k = 0; k < k_per_shape; ++k) {
            Rng rng(derive_seed(seed, si, static_cast<std::uint64_t>(k)));
            Snippet s = sample_snippet(c, dev, proto, shapes[si], rng, rule);
            s.index = k;
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace svb::snip
