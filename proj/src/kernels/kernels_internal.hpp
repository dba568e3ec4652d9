#pragma once

#include "svb/kernels.hpp"

namespace svb::kernels {

void apply_1q_scalar(cplx* v, int n_bits, int target, const cplx m[4]);
void apply_diag1q_scalar(cplx* v, int n_bits, int target, cplx d0, cplx d1);
void apply_cx_scalar(cplx* v, int n_bits, int control, int target);
cplx cdot_scalar(const cplx* a, const cplx* b, std::size_t n);
void axpy_scalar(cplx* y, const cplx* x, cplx alpha, std::size_t n);
void scale_scalar(cplx* v, cplx alpha, std::size_t n);

extern const Ops kScalarOps;

#if defined(SVB_HAVE_AVX2)
extern const Ops kAvx2Ops;
#endif
#if defined(__aarch64__)
extern const Ops kNeonOps;
#endif

}  // namespace svb::kernels
