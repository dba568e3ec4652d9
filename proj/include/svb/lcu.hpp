#pragma once

#include <string>
#include <vector>

#include "svb/circuit.hpp"
#include "svb/common.hpp"

namespace svb::lcu {

/// One weighted Pauli-string unitary of the operator A = sum_l c_l P_l.
struct PauliTerm {
    double coeff = 0.0;
    std::string pauli;  // over {I,X,Y,Z}, length = system register size
};

enum class SelectMode { direct, unary };
enum class PrepareMode { multiplexed, multicontrolled };

SelectMode select_mode_from_string(const std::string& s);
PrepareMode prepare_mode_from_string(const std::string& s);

struct LcuSpec {
    std::vector<PauliTerm> terms;
    int n = 0;           // system qubits
    int m = 0;           // index qubits, ceil(log2(T))
    double one_norm = 0; // sum |c_l|
    SelectMode select = SelectMode::direct;
    int aux_total = 0;   // m (direct) or 2m-1 (unary)
};

/// Complete binary trie of depth m. Heap layout: node k has children 2k+1 and
/// 2k+2; leaves occupy [2^m - 1, 2^(m+1) - 1). Leaves hold sqrt(|c_l| / ||c||_1),
/// internal nodes hold partial norms; every node carries the sign used by the
/// bottom-up flip rules.
struct StateTree {
    int m = 0;
    std::vector<double> norm;
    std::vector<int> sign;  // +-1

    int node_count() const { return static_cast<int>(norm.size()); }
    int first_leaf() const { return (1 << m) - 1; }
};

/// Rotation angles for the prepare oracle, heap-ordered over internal nodes
/// (2^m - 1 entries). flip marks angles negated in the unprepare oracle;
/// global_flip compensates an overall -1 when the first coefficient is negative.
struct AngleTable {
    int m = 0;
    std::vector<double> theta;
    std::vector<bool> flip;
    bool global_flip = false;

    /// Entry for tree layer j (root = 0) and control pattern i.
    double at(int j, int i) const { return theta[(1 << j) - 1 + i]; }
    bool flip_at(int j, int i) const { return flip[(1 << j) - 1 + i]; }
};

/// Sizes the index register (m = ceil(log2 T), capacity T <= 2^m) and the
/// auxiliary total for the chosen select mode.
LcuSpec plan_registers(const std::vector<PauliTerm>& terms, SelectMode mode);

StateTree build_state_tree(const LcuSpec& spec);

AngleTable rotation_angles(const StateTree& tree);

/// Prepare oracle acting on the index register (qubits i0..i{m-1}, i0 = MSB).
/// multiplexed mode emits ry and cx only; multicontrolled mode mirrors the
/// textbook controlled-rotation cascade.
Circuit build_prepare(const AngleTable& angles, PrepareMode mode);

/// Unprepare oracle: same structure with flip-marked angles negated.
/// apply_sign_flips=false is a diagnostic knob that drops the sign handling.
Circuit build_unprepare(const AngleTable& angles, PrepareMode mode, bool apply_sign_flips = true);

/// Select oracle sum_l |l><l| (x) U_l over index (+ accumulator ancillas in
/// unary mode) and system registers.
Circuit build_select(const LcuSpec& spec, SelectMode mode);

struct AssembleOptions {
    PrepareMode prepare = PrepareMode::multiplexed;
    bool apply_sign_flips = true;
};

/// prepare -> select -> adjoint(unprepare) on [index, ancilla, system] registers.
Circuit assemble_lcu(const LcuSpec& spec, const AssembleOptions& opts = {});

/// Max-abs entrywise error || A/||c||_1 - (<0|^aux (x) I) U (|0>^aux (x) I) ||.
/// System register = trailing n qubits. Dense; capacity-capped at 12 qubits.
double verify_block_encoding(const Circuit& circuit, const LcuSpec& spec);

/// Small operators used in tests and demos ("identity-plus-z", "two-qubit-sum",
/// "mixed-signs").
std::vector<PauliTerm> builtin_operator(const std::string& name);

std::vector<std::string> index_labels(int m);
std::vector<std::string> ancilla_labels(int m);
std::vector<std::string> system_labels(int n);

}  // namespace svb::lcu
