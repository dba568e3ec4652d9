#include "svb/dense.hpp"

#include <algorithm>
#include <cmath>

#include "svb/kernels.hpp"

namespace svb::dense {

namespace {

constexpr int kUnitaryCap = 12;
const cplx kI(0.0, 1.0);

std::array<cplx, 4> ry_matrix(double theta) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return {cplx(c), cplx(-s), cplx(s), cplx(c)};
}

// iterate index pairs (i0, i0|tmask) whose control bits are all set
template <typename F>
void for_controlled_pairs(int n, std::size_t ctrl_mask, std::size_t tmask, F&& f) {
    const std::size_t size = std::size_t{1} << n;
    for (std::size_t i = 0; i < size; ++i) {
        if ((i & tmask) == 0 && (i & ctrl_mask) == ctrl_mask) f(i, i | tmask);
    }
}

void apply_controlled_1q(Vec& v, int n, std::size_t ctrl_mask, int target_bit,
                         const std::array<cplx, 4>& m) {
    const std::size_t tmask = std::size_t{1} << target_bit;
    for_controlled_pairs(n, ctrl_mask, tmask, [&](std::size_t i0, std::size_t i1) {
        const cplx a = v[i0], b = v[i1];
        v[i0] = m[0] * a + m[1] * b;
        v[i1] = m[2] * a + m[3] * b;
    });
}

std::size_t ctrl_mask_of(const Gate& g, const std::vector<int>& qubit_idx, int n, int n_ctrl) {
    std::size_t mask = 0;
    for (int i = 0; i < n_ctrl; ++i) mask |= std::size_t{1} << bit_of(qubit_idx[i], n);
    return mask;
}

}  // namespace

std::array<cplx, 4> gate_matrix_1q(const std::string& name, const std::vector<double>& params) {
    const double isq = 1.0 / std::sqrt(2.0);
    if (name == "id") return {cplx(1), cplx(0), cplx(0), cplx(1)};
    if (name == "x") return {cplx(0), cplx(1), cplx(1), cplx(0)};
    if (name == "y") return {cplx(0), -kI, kI, cplx(0)};
    if (name == "z") return {cplx(1), cplx(0), cplx(0), cplx(-1)};
    if (name == "h") return {cplx(isq), cplx(isq), cplx(isq), cplx(-isq)};
    if (name == "s") return {cplx(1), cplx(0), cplx(0), kI};
    if (name == "sdg") return {cplx(1), cplx(0), cplx(0), -kI};
    if (name == "t") return {cplx(1), cplx(0), cplx(0), std::exp(kI * (3.14159265358979323846 / 4.0))};
    if (name == "tdg") return {cplx(1), cplx(0), cplx(0), std::exp(-kI * (3.14159265358979323846 / 4.0))};
    if (name == "sx")
        return {cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5)};
    if (name == "sxdg")
        return {cplx(0.5, -0.5), cplx(0.5, 0.5), cplx(0.5, 0.5), cplx(0.5, -0.5)};
    if (name == "rx") {
        const double c = std::cos(params.at(0) / 2.0), s = std::sin(params.at(0) / 2.0);
        return {cplx(c), -kI * s, -kI * s, cplx(c)};
    }
    if (name == "ry") return ry_matrix(params.at(0));
    if (name == "rz") {
        const cplx e = std::exp(-kI * (params.at(0) / 2.0));
        return {e, cplx(0), cplx(0), std::conj(e)};
    }
    if (name == "p") return {cplx(1), cplx(0), cplx(0), std::exp(kI * params.at(0))};
    if (name == "u") {
        // u(theta, phi, lambda), the usual U3 convention
        const double th = params.at(0), ph = params.at(1), la = params.at(2);
        const double c = std::cos(th / 2.0), s = std::sin(th / 2.0);
        return {cplx(c), -std::exp(kI * la) * s, std::exp(kI * ph) * s, std::exp(kI * (ph + la)) * c};
    }
    throw InputError("not a one-qubit gate: '" + name + "'");
}

Vec zero_state(int n) { return basis_state(n, 0); }

Vec basis_state(int n, std::size_t index) {
    Vec v(std::size_t{1} << n, cplx(0));
    v[index] = cplx(1);
    return v;
}

void apply_gate(Vec& v, int n, const Gate& g, const std::vector<int>& qubit_idx) {
    const auto& k = kernels::active();
    const int arity = static_cast<int>(qubit_idx.size());
    if (arity == 1) {
        const auto m = gate_matrix_1q(g.name, g.params);
        const int bit = bit_of(qubit_idx[0], n);
        if (g.name == "rz" || g.name == "z" || g.name == "s" || g.name == "sdg" || g.name == "t" ||
            g.name == "tdg" || g.name == "p") {
            k.apply_diag1q(v.data(), n, bit, m[0], m[3]);
        } else {
            k.apply_1q(v.data(), n, bit, m.data());
        }
        return;
    }
    if (g.name == "cx") {
        k.apply_cx(v.data(), n, bit_of(qubit_idx[0], n), bit_of(qubit_idx[1], n));
        return;
    }
    if (g.name == "cz") {
        const std::size_t mask =
            (std::size_t{1} << bit_of(qubit_idx[0], n)) | (std::size_t{1} << bit_of(qubit_idx[1], n));
        for (std::size_t i = 0; i < v.size(); ++i) {
            if ((i & mask) == mask) v[i] = -v[i];
        }
        return;
    }
    if (g.name == "swap") {
        const std::size_t m0 = std::size_t{1} << bit_of(qubit_idx[0], n);
        const std::size_t m1 = std::size_t{1} << bit_of(qubit_idx[1], n);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if ((i & m0) && !(i & m1)) std::swap(v[i], v[(i & ~m0) | m1]);
        }
        return;
    }
    if (g.name == "mcx" || g.name == "mcy" || g.name == "mcz" || g.name == "mcry") {
        const int n_ctrl = arity - 1;
        const std::size_t cmask = ctrl_mask_of(g, qubit_idx, n, n_ctrl);
        const int tbit = bit_of(qubit_idx[n_ctrl], n);
        std::array<cplx, 4> m{};
        if (g.name == "mcx") m = gate_matrix_1q("x", {});
        else if (g.name == "mcy") m = gate_matrix_1q("y", {});
        else if (g.name == "mcz") m = gate_matrix_1q("z", {});
        else m = ry_matrix(g.params.at(0));
        apply_controlled_1q(v, n, cmask, tbit, m);
        return;
    }
    throw InputError("cannot simulate gate '" + g.name + "'");
}

void apply_circuit(Vec& v, const Circuit& c) {
    const int n = c.width();
    std::vector<int> idx;
    for (const auto& layer : c.layers()) {
        for (const auto& g : layer) {
            idx.clear();
            for (const auto& q : g.qubits) idx.push_back(c.qubit_index(q));
            apply_gate(v, n, g, idx);
        }
    }
}

std::vector<Vec> circuit_unitary(const Circuit& c) {
    const int n = c.width();
    if (n > kUnitaryCap)
        throw CapacityError("dense unitary limited to " + std::to_string(kUnitaryCap) + " qubits, got " +
                            std::to_string(n));
    const std::size_t dim = std::size_t{1} << n;
    std::vector<Vec> cols(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        cols[j] = basis_state(n, j);
        apply_circuit(cols[j], c);
    }
    return cols;
}

double max_abs_diff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        for (std::size_t i = 0; i < a[j].size(); ++i) m = std::max(m, std::abs(a[j][i] - b[j][i]));
    }
    return m;
}

double diff_up_to_global_phase(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    // align on a's largest entry
    std::size_t bj = 0, bi = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        for (std::size_t i = 0; i < a[j].size(); ++i) {
            if (std::abs(a[j][i]) > best) {
                best = std::abs(a[j][i]);
                bj = j;
                bi = i;
            }
        }
    }
    if (best <= 0.0 || std::abs(b[bj][bi]) == 0.0) return max_abs_diff(a, b);
    cplx phase = (a[bj][bi] / std::abs(a[bj][bi])) / (b[bj][bi] / std::abs(b[bj][bi]));
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        for (std::size_t i = 0; i < a[j].size(); ++i)
            m = std::max(m, std::abs(a[j][i] - phase * b[j][i]));
    }
    return m;
}

Vec pauli_sum_matrix(const std::vector<std::pair<double, std::string>>& terms, int n) {
    const std::size_t dim = std::size_t{1} << n;
    Vec mat(dim * dim, cplx(0));
    for (const auto& [coeff, pauli] : terms) {
        if (static_cast<int>(pauli.size()) != n) throw InputError("pauli string length mismatch");
        std::size_t xmask = 0;
        for (int q = 0; q < n; ++q) {
            const char ch = pauli[q];
            if (ch == 'X' || ch == 'Y') xmask |= std::size_t{1} << bit_of(q, n);
        }
        for (std::size_t r = 0; r < dim; ++r) {
            const std::size_t col = r ^ xmask;
            cplx phase(1.0);
            for (int q = 0; q < n; ++q) {
                const std::size_t bit = (r >> bit_of(q, n)) & 1;
                switch (pauli[q]) {
                    case 'I': break;
                    case 'X': break;
                    case 'Y': phase *= bit ? kI : -kI; break;
                    case 'Z': phase *= bit ? cplx(-1) : cplx(1); break;
                    default: throw InputError(std::string("bad pauli character '") + pauli[q] + "'");
                }
            }
            mat[r * dim + col] += coeff * phase;
        }
    }
    return mat;
}

void dm_init_pauli(Vec& rho, int n, std::size_t pauli_index) {
    const std::size_t dim = std::size_t{1} << n;
    rho.assign(dim * dim, cplx(0));
    std::size_t xmask = 0;
    for (int q = 0; q < n; ++q) {
        const std::size_t digit = (pauli_index >> (2 * bit_of(q, n))) & 3;
        if (digit == 1 || digit == 2) xmask |= std::size_t{1} << bit_of(q, n);
    }
    for (std::size_t r = 0; r < dim; ++r) {
        const std::size_t col = r ^ xmask;
        cplx phase(1.0);
        for (int q = 0; q < n; ++q) {
            const std::size_t digit = (pauli_index >> (2 * bit_of(q, n))) & 3;
            const std::size_t bit = (r >> bit_of(q, n)) & 1;
            if (digit == 2) phase *= bit ? kI : -kI;
            else if (digit == 3) phase *= bit ? cplx(-1) : cplx(1);
        }
        rho[r * dim + col] = phase;
    }
}

namespace {

// Conjugation helper: left-multiply acts on the row bits (high n), right by
// the adjoint acts on the column bits with the conjugated matrix.
void dm_conjugate_1q(Vec& rho, int n, int qubit_idx, const std::array<cplx, 4>& m) {
    const auto& k = kernels::active();
    const int b = bit_of(qubit_idx, n);
    k.apply_1q(rho.data(), 2 * n, n + b, m.data());
    const std::array<cplx, 4> mc = {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])};
    k.apply_1q(rho.data(), 2 * n, b, mc.data());
}

}  // namespace

void dm_apply_gate(Vec& rho, int n, const Gate& g, const std::vector<int>& qubit_idx) {
    const auto& k = kernels::active();
    const int arity = static_cast<int>(qubit_idx.size());
    if (arity == 1) {
        dm_conjugate_1q(rho, n, qubit_idx[0], gate_matrix_1q(g.name, g.params));
        return;
    }
    if (g.name == "cx") {
        const int bc = bit_of(qubit_idx[0], n), bt = bit_of(qubit_idx[1], n);
        k.apply_cx(rho.data(), 2 * n, n + bc, n + bt);
        k.apply_cx(rho.data(), 2 * n, bc, bt);
        return;
    }
    if (g.name == "cz" || g.name == "swap" || g.name == "mcx" || g.name == "mcy" || g.name == "mcz" ||
        g.name == "mcry") {
        // generic: apply on row side then conjugate on column side via the
        // statevector applier over shifted bit positions
        const std::size_t dim = std::size_t{1} << n;
        // rows: treat rho as 2n-qubit state, gate on qubits shifted into rows
        Vec& v = rho;
        // row application: same gate with qubit bit positions + n
        {
            std::vector<int> row_idx = qubit_idx;  // bit_of(q, 2n-qubit state) must equal n + bit_of(q, n)
            // bit_of(q, n) = n-1-q ; want bit n + (n-1-q) = 2n-1-q = bit_of(q, 2n)
            apply_gate(v, 2 * n, g, row_idx);
        }
        // column application with conjugated matrix: these gates are real
        // except mcy (entries +-i) and mcry (real); conj(cz/swap/mcx/mcz/mcry) = same
        if (g.name == "mcy") {
            // conj(Y) = -Y: apply mcy then flip sign on the controlled-pair subspace
            std::vector<int> col_idx;
            for (int q : qubit_idx) col_idx.push_back(q + n);
            apply_gate(v, 2 * n, g, col_idx);
            const int n_ctrl = arity - 1;
            std::size_t cmask = 0;
            for (int i = 0; i < n_ctrl; ++i) cmask |= std::size_t{1} << bit_of(qubit_idx[i] + n, 2 * n);
            for (std::size_t i = 0; i < dim * dim; ++i) {
                if ((i & cmask) == cmask) v[i] = -v[i];
            }
        } else {
            std::vector<int> col_idx;
            for (int q : qubit_idx) col_idx.push_back(q + n);
            apply_gate(v, 2 * n, g, col_idx);
        }
        return;
    }
    throw InputError("cannot conjugate gate '" + g.name + "' on a density matrix");
}

void dm_apply_pauli_channel(Vec& rho, Vec& scratch, int n, int qubit_idx, double px, double py,
                            double pz) {
    const double pt = px + py + pz;
    if (pt <= 0.0) return;
    const auto& k = kernels::active();
    scratch.assign(rho.size(), cplx(0));
    k.axpy(scratch.data(), rho.data(), cplx(1.0 - pt), rho.size());
    const char paulis[3] = {'x', 'y', 'z'};
    const double probs[3] = {px, py, pz};
    for (int pi = 0; pi < 3; ++pi) {
        if (probs[pi] <= 0.0) continue;
        const Gate g(std::string(1, paulis[pi]), {"q"});
        dm_apply_gate(rho, n, g, {qubit_idx});
        k.axpy(scratch.data(), rho.data(), cplx(probs[pi]), rho.size());
        dm_apply_gate(rho, n, g, {qubit_idx});  // involution: restore
    }
    rho.swap(scratch);
}

void dm_apply_rz(Vec& rho, int n, int qubit_idx, double theta) {
    const auto& k = kernels::active();
    const int b = bit_of(qubit_idx, n);
    const cplx e = std::exp(cplx(0.0, -theta / 2.0));
    k.apply_diag1q(rho.data(), 2 * n, n + b, e, std::conj(e));
    k.apply_diag1q(rho.data(), 2 * n, b, std::conj(e), e);
}

cplx dm_hs_inner(const Vec& a, const Vec& b) {
    return kernels::active().cdot(a.data(), b.data(), a.size());
}

}  // namespace svb::dense
