#include "svb/lcu.hpp"

#include <algorithm>
#include <cmath>

#include "svb/dense.hpp"

namespace svb::lcu {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kAngleEps = 1e-15;

void check_terms(const std::vector<PauliTerm>& terms) {
    if (terms.empty()) throw InputError("term list is empty");
    const std::size_t n = terms.front().pauli.size();
    if (n == 0) throw InputError("empty pauli string");
    for (const auto& t : terms) {
        if (!std::isfinite(t.coeff) || t.coeff == 0.0)
            throw InputError("coefficients must be finite and nonzero");
        if (t.pauli.size() != n) throw InputError("pauli strings must share one length");
        for (char ch : t.pauli) {
            if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z')
                throw InputError(std::string("bad pauli character '") + ch + "'");
        }
    }
}

}  // namespace

SelectMode select_mode_from_string(const std::string& s) {
    if (s == "direct") return SelectMode::direct;
    if (s == "unary") return SelectMode::unary;
    throw InputError("select mode must be 'direct' or 'unary', got '" + s + "'");
}

PrepareMode prepare_mode_from_string(const std::string& s) {
    if (s == "multiplexed") return PrepareMode::multiplexed;
    if (s == "multicontrolled") return PrepareMode::multicontrolled;
    throw InputError("prepare mode must be 'multiplexed' or 'multicontrolled', got '" + s + "'");
}

std::vector<std::string> index_labels(int m) {
    std::vector<std::string> out;
    for (int j = 0; j < m; ++j) out.push_back("i" + std::to_string(j));
    return out;
}

std::vector<std::string> ancilla_labels(int m) {
    std::vector<std::string> out;
    for (int j = 1; j < m; ++j) out.push_back("a" + std::to_string(j));
    return out;
}

std::vector<std::string> system_labels(int n) {
    std::vector<std::string> out;
    for (int k = 0; k < n; ++k) out.push_back("s" + std::to_string(k));
    return out;
}

LcuSpec plan_registers(const std::vector<PauliTerm>& terms, SelectMode mode) {
    check_terms(terms);
    LcuSpec spec;
    spec.terms = terms;
    spec.n = static_cast<int>(terms.front().pauli.size());
    const std::size_t t_count = terms.size();
    int m = 0;
    while ((std::size_t{1} << m) < t_count) ++m;
    spec.m = m;
    spec.one_norm = 0.0;
    for (const auto& t : terms) spec.one_norm += std::abs(t.coeff);
    spec.select = mode;
    spec.aux_total = (mode == SelectMode::unary) ? std::max(2 * m - 1, 0) : m;
    return spec;
}

StateTree build_state_tree(const LcuSpec& spec) {
    StateTree tree;
    tree.m = spec.m;
    const int nodes = (1 << (spec.m + 1)) - 1;
    tree.norm.assign(nodes, 0.0);
    tree.sign.assign(nodes, 1);
    const int first_leaf = tree.first_leaf();
    for (std::size_t l = 0; l < spec.terms.size(); ++l) {
        tree.norm[first_leaf + l] = std::sqrt(std::abs(spec.terms[l].coeff) / spec.one_norm);
        tree.sign[first_leaf + l] = spec.terms[l].coeff < 0.0 ? -1 : 1;
    }
    for (int k = first_leaf - 1; k >= 0; --k) {
        tree.norm[k] = std::hypot(tree.norm[2 * k + 1], tree.norm[2 * k + 2]);
        // a subtree's sign is the sign of its leftmost leaf; the flip rules
        // correct relative signs, and any overall -1 surfaces at the root
        tree.sign[k] = tree.sign[2 * k + 1];
    }
    return tree;
}

AngleTable rotation_angles(const StateTree& tree) {
    AngleTable table;
    table.m = tree.m;
    const int internal = (1 << tree.m) - 1;
    table.theta.assign(internal, 0.0);
    table.flip.assign(internal, false);
    for (int k = 0; k < internal; ++k) {
        if (tree.norm[k] > 0.0) {
            const double ratio = std::clamp(tree.norm[2 * k + 2] / tree.norm[k], 0.0, 1.0);
            table.theta[k] = 2.0 * std::asin(ratio);
        }
        table.flip[k] = tree.sign[2 * k + 1] != tree.sign[2 * k + 2];
    }
    table.global_flip = tree.sign[0] < 0;
    return table;
}

namespace {

void emit(std::vector<std::vector<Gate>>& layers, Gate g) { layers.push_back({std::move(g)}); }

// Uniformly controlled Ry via the standard halving recursion; emits only ry
// and cx. angles[i] acts when the controls (MSB first) read i in binary.
void emit_ucry(std::vector<std::vector<Gate>>& layers, const std::vector<double>& angles,
               const std::vector<std::string>& ctrls, const std::string& target) {
    if (ctrls.empty()) {
        if (std::abs(angles.at(0)) > kAngleEps) emit(layers, Gate("ry", {target}, {angles[0]}));
        return;
    }
    const std::size_t h = angles.size() / 2;
    std::vector<double> sum(h), diff(h);
    for (std::size_t i = 0; i < h; ++i) {
        sum[i] = (angles[i] + angles[i + h]) / 2.0;
        diff[i] = (angles[i] - angles[i + h]) / 2.0;
    }
    const std::vector<std::string> rest(ctrls.begin() + 1, ctrls.end());
    emit_ucry(layers, sum, rest, target);
    emit(layers, Gate("cx", {ctrls[0], target}));
    emit_ucry(layers, diff, rest, target);
    emit(layers, Gate("cx", {ctrls[0], target}));
}

Circuit build_prepare_impl(const AngleTable& angles, PrepareMode mode, bool unprepare,
                           bool apply_sign_flips) {
    const int m = angles.m;
    const auto idx = index_labels(m);
    std::vector<std::vector<Gate>> layers;
    for (int j = 0; j < m; ++j) {
        std::vector<double> layer_angles(std::size_t{1} << j);
        for (int i = 0; i < (1 << j); ++i) {
            double th = angles.at(j, i);
            if (unprepare && apply_sign_flips && angles.flip_at(j, i)) th = -th;
            layer_angles[i] = th;
        }
        const std::vector<std::string> ctrls(idx.begin(), idx.begin() + j);
        if (mode == PrepareMode::multiplexed) {
            emit_ucry(layers, layer_angles, ctrls, idx[j]);
        } else {
            for (int i = 0; i < (1 << j); ++i) {
                if (std::abs(layer_angles[i]) <= kAngleEps) continue;
                std::vector<std::string> sandwich;
                for (int b = 0; b < j; ++b) {
                    if (((i >> (j - 1 - b)) & 1) == 0) sandwich.push_back(idx[b]);
                }
                for (const auto& q : sandwich) emit(layers, Gate("x", {q}));
                if (j == 0) {
                    emit(layers, Gate("ry", {idx[0]}, {layer_angles[i]}));
                } else {
                    std::vector<std::string> qubits(idx.begin(), idx.begin() + j);
                    qubits.push_back(idx[j]);
                    emit(layers, Gate("mcry", std::move(qubits), {layer_angles[i]}));
                }
                for (const auto& q : sandwich) emit(layers, Gate("x", {q}));
            }
        }
    }
    if (unprepare && apply_sign_flips && angles.global_flip && m >= 1) {
        // ry(2*pi) = -I restores the overall sign the Ry tree cannot reach
        emit(layers, Gate("ry", {idx[0]}, {2.0 * kPi}));
    }
    return Circuit(idx, std::move(layers));
}

}  // namespace

Circuit build_prepare(const AngleTable& angles, PrepareMode mode) {
    return build_prepare_impl(angles, mode, false, true);
}

Circuit build_unprepare(const AngleTable& angles, PrepareMode mode, bool apply_sign_flips) {
    return build_prepare_impl(angles, mode, true, apply_sign_flips);
}

namespace {

void emit_pattern_sandwich(std::vector<std::vector<Gate>>& layers, const std::vector<std::string>& idx,
                           std::size_t l, int m) {
    for (int j = 0; j < m; ++j) {
        if (((l >> (m - 1 - j)) & 1) == 0) emit(layers, Gate("x", {idx[j]}));
    }
}

void emit_controlled_pauli(std::vector<std::vector<Gate>>& layers, char pauli,
                           const std::vector<std::string>& ctrls, const std::string& target) {
    if (ctrls.empty()) {
        emit(layers, Gate(std::string(1, static_cast<char>(std::tolower(pauli))), {target}));
        return;
    }
    std::vector<std::string> qubits = ctrls;
    qubits.push_back(target);
    if (ctrls.size() == 1 && pauli == 'X') {
        emit(layers, Gate("cx", std::move(qubits)));
    } else if (ctrls.size() == 1 && pauli == 'Z') {
        emit(layers, Gate("cz", std::move(qubits)));
    } else {
        const char* name = pauli == 'X' ? "mcx" : (pauli == 'Y' ? "mcy" : "mcz");
        emit(layers, Gate(name, std::move(qubits)));
    }
}

}  // namespace

Circuit build_select(const LcuSpec& spec, SelectMode mode) {
    const int m = spec.m;
    const int n = spec.n;
    const auto idx = index_labels(m);
    const auto sys = system_labels(n);
    const bool unary = mode == SelectMode::unary && m >= 2;
    const auto anc = unary ? ancilla_labels(m) : std::vector<std::string>{};

    std::vector<std::string> qubits = idx;
    qubits.insert(qubits.end(), anc.begin(), anc.end());
    qubits.insert(qubits.end(), sys.begin(), sys.end());

    std::vector<std::vector<Gate>> layers;
    for (std::size_t l = 0; l < spec.terms.size(); ++l) {
        const std::string& pauli = spec.terms[l].pauli;
        bool all_identity = pauli.find_first_not_of('I') == std::string::npos;
        if (all_identity) continue;  // |l><l| (x) I contributes no gates
        emit_pattern_sandwich(layers, idx, l, m);
        if (unary) {
            // accumulator ladder: a_{j} holds the AND of the first j+1 index bits
            emit(layers, Gate("mcx", {idx[0], idx[1], anc[0]}));
            for (int j = 2; j < m; ++j) emit(layers, Gate("mcx", {anc[j - 2], idx[j], anc[j - 1]}));
            const std::string& hot = anc[m - 2];
            for (int k = 0; k < n; ++k) {
                if (pauli[k] != 'I') emit_controlled_pauli(layers, pauli[k], {hot}, sys[k]);
            }
            for (int j = m - 1; j >= 2; --j) emit(layers, Gate("mcx", {anc[j - 2], idx[j], anc[j - 1]}));
            emit(layers, Gate("mcx", {idx[0], idx[1], anc[0]}));
        } else {
            for (int k = 0; k < n; ++k) {
                if (pauli[k] != 'I') emit_controlled_pauli(layers, pauli[k], idx, sys[k]);
            }
        }
        emit_pattern_sandwich(layers, idx, l, m);
    }
    return Circuit(std::move(qubits), std::move(layers));
}

Circuit assemble_lcu(const LcuSpec& spec, const AssembleOptions& opts) {
    const int m = spec.m;
    const auto idx = index_labels(m);
    const auto anc =
        (spec.select == SelectMode::unary && m >= 2) ? ancilla_labels(m) : std::vector<std::string>{};
    const auto sys = system_labels(spec.n);
    std::vector<std::string> full = idx;
    full.insert(full.end(), anc.begin(), anc.end());
    full.insert(full.end(), sys.begin(), sys.end());

    Circuit c(full, {});
    const Circuit select = build_select(spec, spec.select);
    if (m == 0) {
        c = concat(c, select);
        if (spec.terms.front().coeff < 0.0) {
            // single negative term: block must be -U_0
            c = concat(c, Circuit(sys, {{Gate("ry", {sys[0]}, {2.0 * kPi})}}));
        }
        return c;
    }
    const AngleTable angles = rotation_angles(build_state_tree(spec));
    c = concat(c, build_prepare(angles, opts.prepare));
    c = concat(c, select);
    c = concat(c, adjoint(build_unprepare(angles, opts.prepare, opts.apply_sign_flips)));
    return c;
}

double verify_block_encoding(const Circuit& circuit, const LcuSpec& spec) {
    const int total = circuit.width();
    const int n = spec.n;
    if (total > 12)
        throw CapacityError("dense verification limited to 12 qubits, circuit has " +
                            std::to_string(total));
    if (total < n) throw InputError("circuit narrower than the system register");
    const std::size_t sys_dim = std::size_t{1} << n;

    std::vector<std::pair<double, std::string>> plain;
    plain.reserve(spec.terms.size());
    for (const auto& t : spec.terms) plain.emplace_back(t.coeff, t.pauli);
    const dense::Vec a = dense::pauli_sum_matrix(plain, n);

    double err = 0.0;
    for (std::size_t s = 0; s < sys_dim; ++s) {
        dense::Vec col = dense::basis_state(total, s);  // aux bits high and zero
        dense::apply_circuit(col, circuit);
        for (std::size_t r = 0; r < sys_dim; ++r) {
            const cplx want = a[r * sys_dim + s] / spec.one_norm;
            err = std::max(err, std::abs(col[r] - want));
        }
    }
    return err;
}

std::vector<PauliTerm> builtin_operator(const std::string& name) {
    if (name == "identity-plus-z") return {{0.5, "I"}, {0.5, "Z"}};
    if (name == "identity-minus-z") return {{0.5, "I"}, {-0.5, "Z"}};
    if (name == "two-qubit-sum") return {{0.4, "ZZ"}, {0.3, "XI"}, {0.2, "IX"}, {0.1, "YY"}};
    if (name == "mixed-signs") return {{0.35, "XZ"}, {-0.25, "ZI"}, {0.25, "IY"}, {-0.15, "YX"}};
    throw InputError("unknown builtin operator '" + name + "'");
}

}  // namespace svb::lcu
