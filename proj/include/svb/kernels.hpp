#pragma once

#include <cstddef>
#include <string>

#include "svb/common.hpp"

namespace svb::kernels {

/// Data-parallel inner loops shared by the statevector and density-matrix
/// paths. Amplitude arrays are interleaved std::complex<double>; "bit" is a
/// position in the amplitude index (0 = least significant).
///
/// Scalar implementations are the reference; AVX2 (x86) and NEON (aarch64)
/// variants are selected at runtime and equivalence-tested against scalar.
struct Ops {
    // v[pair on bit t] <- 2x2 m (row-major) applied to (v_i0, v_i1)
    void (*apply_1q)(cplx* v, int n_bits, int target, const cplx m[4]);
    // v[i] *= (bit t of i) ? d1 : d0
    void (*apply_diag1q)(cplx* v, int n_bits, int target, cplx d0, cplx d1);
    // controlled-X permutation on (control, target) bits
    void (*apply_cx)(cplx* v, int n_bits, int control, int target);
    // sum conj(a[i]) * b[i]
    cplx (*cdot)(const cplx* a, const cplx* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(cplx* y, const cplx* x, cplx alpha, std::size_t n);
    // v[i] *= alpha
    void (*scale)(cplx* v, cplx alpha, std::size_t n);
};

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);
bool available(Backend b);

/// Table for a specific backend; throws InputError if unavailable on this host.
const Ops& get(Backend b);

/// Runtime-selected table. Default: best available, overridable with the
/// SVB_KERNELS environment variable (scalar|avx2|neon) or set_backend().
const Ops& active();
Backend active_backend();
void set_backend(Backend b);

}  // namespace svb::kernels
