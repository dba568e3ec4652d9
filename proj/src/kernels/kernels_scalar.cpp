#include "kernels_internal.hpp"

// Reference kernels. Kept branch-light but otherwise plain; the SIMD variants
// must match these within floating-point reassociation tolerance.

namespace svb::kernels {

void apply_1q_scalar(cplx* v, int n_bits, int target, const cplx m[4]) {
    const std::size_t half = std::size_t{1} << (n_bits - 1);
    const std::size_t mask = std::size_t{1} << target;
    const std::size_t lo = mask - 1;
    const std::size_t hi = ~lo;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = ((i & hi) << 1) | (i & lo);
        const std::size_t i1 = i0 | mask;
        const cplx a = v[i0];
        const cplx b = v[i1];
        v[i0] = m[0] * a + m[1] * b;
        v[i1] = m[2] * a + m[3] * b;
    }
}

void apply_diag1q_scalar(cplx* v, int n_bits, int target, cplx d0, cplx d1) {
    const std::size_t size = std::size_t{1} << n_bits;
    const std::size_t mask = std::size_t{1} << target;
    for (std::size_t i = 0; i < size; ++i) {
        v[i] *= (i & mask) ? d1 : d0;
    }
}

void apply_cx_scalar(cplx* v, int n_bits, int control, int target) {
    const std::size_t size = std::size_t{1} << n_bits;
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < size; ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(v[i], v[i | tmask]);
        }
    }
}

cplx cdot_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
    }
    return {re, im};
}

void axpy_scalar(cplx* y, const cplx* x, cplx alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale_scalar(cplx* v, cplx alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) v[i] *= alpha;
}

const Ops kScalarOps = {apply_1q_scalar, apply_diag1q_scalar, apply_cx_scalar,
                        cdot_scalar,     axpy_scalar,         scale_scalar};

}  // namespace svb::kernels
