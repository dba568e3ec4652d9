// NEON kernel variants for aarch64 builds. One complex<double> per 128-bit
// register; same pair/run decomposition as the scalar reference.

#include "kernels_internal.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace svb::kernels {

namespace {

const float64x2_t kSign = {-1.0, 1.0};

// x * c for complex scalar c
inline float64x2_t cmul(float64x2_t x, double cr, double ci) {
    const float64x2_t t0 = vmulq_n_f64(x, cr);
    const float64x2_t xs = vextq_f64(x, x, 1);  // [im, re]
    return vfmaq_f64(t0, vmulq_n_f64(xs, ci), kSign);
}

inline float64x2_t loadc(const cplx* p) { return vld1q_f64(reinterpret_cast<const double*>(p)); }
inline void storec(cplx* p, float64x2_t x) { vst1q_f64(reinterpret_cast<double*>(p), x); }

}  // namespace

static void apply_1q_neon(cplx* v, int n_bits, int target, const cplx m[4]) {
    const std::size_t half = std::size_t{1} << (n_bits - 1);
    const std::size_t mask = std::size_t{1} << target;
    const std::size_t lo = mask - 1;
    const std::size_t hi = ~lo;
    for (std::size_t i = 0; i < half; ++i) {
        const std::size_t i0 = ((i & hi) << 1) | (i & lo);
        const std::size_t i1 = i0 | mask;
        const float64x2_t a = loadc(v + i0);
        const float64x2_t b = loadc(v + i1);
        storec(v + i0, vaddq_f64(cmul(a, m[0].real(), m[0].imag()), cmul(b, m[1].real(), m[1].imag())));
        storec(v + i1, vaddq_f64(cmul(a, m[2].real(), m[2].imag()), cmul(b, m[3].real(), m[3].imag())));
    }
}

static void apply_diag1q_neon(cplx* v, int n_bits, int target, cplx d0, cplx d1) {
    const std::size_t size = std::size_t{1} << n_bits;
    const std::size_t mask = std::size_t{1} << target;
    for (std::size_t i = 0; i < size; ++i) {
        const cplx d = (i & mask) ? d1 : d0;
        storec(v + i, cmul(loadc(v + i), d.real(), d.imag()));
    }
}

static cplx cdot_neon(const cplx* a, const cplx* b, std::size_t n) {
    float64x2_t acc_re = vdupq_n_f64(0.0);
    float64x2_t acc_im = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const float64x2_t x = loadc(a + i);
        const float64x2_t y = loadc(b + i);
        acc_re = vfmaq_f64(acc_re, x, y);
        const float64x2_t xs = vextq_f64(x, x, 1);
        acc_im = vfmaq_f64(acc_im, vmulq_f64(xs, y), kSign);
    }
    return {vaddvq_f64(acc_re), vaddvq_f64(acc_im)};
}

static void axpy_neon(cplx* y, const cplx* x, cplx alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        storec(y + i, vaddq_f64(loadc(y + i), cmul(loadc(x + i), alpha.real(), alpha.imag())));
    }
}

static void scale_neon(cplx* v, cplx alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        storec(v + i, cmul(loadc(v + i), alpha.real(), alpha.imag()));
    }
}

const Ops kNeonOps = {apply_1q_neon, apply_diag1q_neon, apply_cx_scalar,
                      cdot_neon,     axpy_neon,         scale_neon};

}  // namespace svb::kernels

#endif  // __aarch64__
