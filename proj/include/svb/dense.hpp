#pragma once

#include <array>
#include <vector>

#include "svb/circuit.hpp"
#include "svb/common.hpp"

namespace svb::dense {

using Vec = std::vector<cplx>;

/// Qubit k of an n-qubit register maps to amplitude-index bit n-1-k
/// (qubit 0 is the most significant bit, matching |q0 q1 ...> notation).
inline int bit_of(int qubit_idx, int n) { return n - 1 - qubit_idx; }

/// 2x2 matrix (row-major) for a named one-qubit gate. Throws InputError for
/// unknown or non-1q names.
std::array<cplx, 4> gate_matrix_1q(const std::string& name, const std::vector<double>& params);

/// Statevector of |0...0> on n qubits.
Vec zero_state(int n);
Vec basis_state(int n, std::size_t index);

/// Apply one gate to a statevector. Qubit indices are positions in the
/// circuit's qubit list. Handles the full vocabulary including mc* gates.
void apply_gate(Vec& v, int n, const Gate& g, const std::vector<int>& qubit_idx);

/// Apply a whole circuit (layer by layer, gate order within layers).
void apply_circuit(Vec& v, const Circuit& c);

/// Matrix column j = U |j>. Capacity-capped at 12 qubits.
std::vector<Vec> circuit_unitary(const Circuit& c);

double max_abs_diff(const std::vector<Vec>& a, const std::vector<Vec>& b);
/// Max-abs difference after aligning global phase on the largest entry of a.
double diff_up_to_global_phase(const std::vector<Vec>& a, const std::vector<Vec>& b);

/// Dense matrix (2^n x 2^n, row-major flat) of sum_l c_l P_l for Pauli
/// strings over {I,X,Y,Z}; string position 0 is qubit 0 (most significant).
Vec pauli_sum_matrix(const std::vector<std::pair<double, std::string>>& terms, int n);

// ---- density-matrix path (row-major 2^n x 2^n stored as a 4^n vector; the
// row index occupies the high n bits, so a conjugation G . G^dag is two
// statevector-style 1q applications on bit pairs) ----

/// rho <- P_i for Pauli index i (base-4 digits, qubit 0 = most significant digit;
/// digit 0..3 = I,X,Y,Z). Unnormalized Pauli (entries of modulus 1).
void dm_init_pauli(Vec& rho, int n, std::size_t pauli_index);

/// rho <- G rho G^dag for a gate.
void dm_apply_gate(Vec& rho, int n, const Gate& g, const std::vector<int>& qubit_idx);

/// rho <- (1-px-py-pz) rho + px X rho X + py Y rho Y + pz Z rho Z on one qubit.
/// scratch must have the same size as rho; contents are clobbered.
void dm_apply_pauli_channel(Vec& rho, Vec& scratch, int n, int qubit_idx, double px, double py,
                            double pz);

/// rho <- Rz(theta) rho Rz(theta)^dag on one qubit.
void dm_apply_rz(Vec& rho, int n, int qubit_idx, double theta);

/// Tr[A^dag B] for row-major flattened matrices.
cplx dm_hs_inner(const Vec& a, const Vec& b);

}  // namespace svb::dense
