// AVX2 kernel variants. Two complex<double> per 256-bit register; complex
// products use the permute/addsub pattern. This translation unit is the only
// one compiled with -mavx2, and it is only entered after a runtime cpuid check.

#include "kernels_internal.hpp"

#if defined(SVB_HAVE_AVX2)

#include <immintrin.h>

namespace svb::kernels {

namespace {

// x * c for a scalar complex constant c, elementwise over 2 complex lanes
inline __m256d cmul_const(__m256d x, __m256d cr, __m256d ci) {
    const __m256d t0 = _mm256_mul_pd(x, cr);
    const __m256d xs = _mm256_permute_pd(x, 0x5);  // swap re/im in each lane
    const __m256d t1 = _mm256_mul_pd(xs, ci);
    return _mm256_addsub_pd(t0, t1);
}

// elementwise complex product x * y
inline __m256d cmul_vv(__m256d x, __m256d y) {
    const __m256d yr = _mm256_movedup_pd(y);
    const __m256d yi = _mm256_permute_pd(y, 0xF);
    const __m256d t0 = _mm256_mul_pd(x, yr);
    const __m256d xs = _mm256_permute_pd(x, 0x5);
    const __m256d t1 = _mm256_mul_pd(xs, yi);
    return _mm256_addsub_pd(t0, t1);
}

inline double hsum(__m256d x) {
    const __m128d lo = _mm256_castpd256_pd128(x);
    const __m128d hi = _mm256_extractf128_pd(x, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

static void apply_1q_avx2(cplx* v, int n_bits, int target, const cplx m[4]) {
    if (n_bits < 2) {
        apply_1q_scalar(v, n_bits, target, m);
        return;
    }
    double* p = reinterpret_cast<double*>(v);
    const __m256d m00r = _mm256_set1_pd(m[0].real()), m00i = _mm256_set1_pd(m[0].imag());
    const __m256d m01r = _mm256_set1_pd(m[1].real()), m01i = _mm256_set1_pd(m[1].imag());
    const __m256d m10r = _mm256_set1_pd(m[2].real()), m10i = _mm256_set1_pd(m[2].imag());
    const __m256d m11r = _mm256_set1_pd(m[3].real()), m11i = _mm256_set1_pd(m[3].imag());
    if (target == 0) {
        const std::size_t size = std::size_t{1} << n_bits;
        for (std::size_t i = 0; i < size; i += 4) {
            const __m256d r0 = _mm256_loadu_pd(p + 2 * i);
            const __m256d r1 = _mm256_loadu_pd(p + 2 * i + 4);
            const __m256d a = _mm256_permute2f128_pd(r0, r1, 0x20);
            const __m256d b = _mm256_permute2f128_pd(r0, r1, 0x31);
            const __m256d na = _mm256_add_pd(cmul_const(a, m00r, m00i), cmul_const(b, m01r, m01i));
            const __m256d nb = _mm256_add_pd(cmul_const(a, m10r, m10i), cmul_const(b, m11r, m11i));
            _mm256_storeu_pd(p + 2 * i, _mm256_permute2f128_pd(na, nb, 0x20));
            _mm256_storeu_pd(p + 2 * i + 4, _mm256_permute2f128_pd(na, nb, 0x31));
        }
        return;
    }
    const std::size_t run = std::size_t{1} << target;
    const std::size_t groups = std::size_t{1} << (n_bits - 1 - target);
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t base0 = g << (target + 1);
        const std::size_t base1 = base0 | run;
        for (std::size_t j = 0; j < run; j += 2) {
            double* pa = p + 2 * (base0 + j);
            double* pb = p + 2 * (base1 + j);
            const __m256d a = _mm256_loadu_pd(pa);
            const __m256d b = _mm256_loadu_pd(pb);
            const __m256d na = _mm256_add_pd(cmul_const(a, m00r, m00i), cmul_const(b, m01r, m01i));
            const __m256d nb = _mm256_add_pd(cmul_const(a, m10r, m10i), cmul_const(b, m11r, m11i));
            _mm256_storeu_pd(pa, na);
            _mm256_storeu_pd(pb, nb);
        }
    }
}

static void apply_diag1q_avx2(cplx* v, int n_bits, int target, cplx d0, cplx d1) {
    if (n_bits < 1) {
        apply_diag1q_scalar(v, n_bits, target, d0, d1);
        return;
    }
    double* p = reinterpret_cast<double*>(v);
    if (target == 0) {
        const __m256d dv = _mm256_setr_pd(d0.real(), d0.imag(), d1.real(), d1.imag());
        const std::size_t size = std::size_t{1} << n_bits;
        for (std::size_t i = 0; i < size; i += 2) {
            _mm256_storeu_pd(p + 2 * i, cmul_vv(_mm256_loadu_pd(p + 2 * i), dv));
        }
        return;
    }
    const __m256d d0r = _mm256_set1_pd(d0.real()), d0i = _mm256_set1_pd(d0.imag());
    const __m256d d1r = _mm256_set1_pd(d1.real()), d1i = _mm256_set1_pd(d1.imag());
    const std::size_t run = std::size_t{1} << target;
    const std::size_t groups = std::size_t{1} << (n_bits - 1 - target);
    for (std::size_t g = 0; g < groups; ++g) {
        const std::size_t base = g << (target + 1);
        for (std::size_t j = 0; j < run; j += 2) {
            double* p0 = p + 2 * (base + j);
            double* p1 = p + 2 * (base + run + j);
            _mm256_storeu_pd(p0, cmul_const(_mm256_loadu_pd(p0), d0r, d0i));
            _mm256_storeu_pd(p1, cmul_const(_mm256_loadu_pd(p1), d1r, d1i));
        }
    }
}

static cplx cdot_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d x = _mm256_loadu_pd(pa + 2 * i);
        const __m256d y = _mm256_loadu_pd(pb + 2 * i);
        acc_re = _mm256_add_pd(acc_re, _mm256_mul_pd(x, y));
        acc_im = _mm256_addsub_pd(acc_im, _mm256_mul_pd(_mm256_permute_pd(x, 0x5), y));
    }
    cplx sum(hsum(acc_re), hsum(acc_im));
    for (; i < n; ++i) {
        const double ar = a[i].real(), ai = a[i].imag();
        const double br = b[i].real(), bi = b[i].imag();
        sum += cplx(ar * br + ai * bi, ar * bi - ai * br);
    }
    return sum;
}

static void axpy_avx2(cplx* y, const cplx* x, cplx alpha, std::size_t n) {
    double* py = reinterpret_cast<double*>(y);
    const double* px = reinterpret_cast<const double*>(x);
    const __m256d ar = _mm256_set1_pd(alpha.real()), ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d yi = _mm256_loadu_pd(py + 2 * i);
        const __m256d xi = _mm256_loadu_pd(px + 2 * i);
        _mm256_storeu_pd(py + 2 * i, _mm256_add_pd(yi, cmul_const(xi, ar, ai)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

static void scale_avx2(cplx* v, cplx alpha, std::size_t n) {
    double* p = reinterpret_cast<double*>(v);
    const __m256d ar = _mm256_set1_pd(alpha.real()), ai = _mm256_set1_pd(alpha.imag());
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        _mm256_storeu_pd(p + 2 * i, cmul_const(_mm256_loadu_pd(p + 2 * i), ar, ai));
    }
    for (; i < n; ++i) v[i] *= alpha;
}

const Ops kAvx2Ops = {apply_1q_avx2, apply_diag1q_avx2, apply_cx_scalar,
                      cdot_avx2,     axpy_avx2,          scale_avx2};

}  // namespace svb::kernels

#endif  // SVB_HAVE_AVX2
