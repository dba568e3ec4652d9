#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "svb/kernels.hpp"
#include "svb/rng.hpp"

using namespace svb;
using kernels::Backend;

namespace {

std::vector<cplx> random_vec(std::size_t n, Rng& rng) {
    std::vector<cplx> v(n);
    for (auto& x : v) x = cplx(rng.normal(), rng.normal());
    return v;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::vector<Backend> simd_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::avx2, Backend::neon}) {
        if (kernels::available(b)) out.push_back(b);
    }
    return out;
}

}  // namespace

TEST_CASE("scalar apply_1q matches direct matrix action") {
    const auto& k = kernels::get(Backend::scalar);
    // X on bit 0 of a 2-bit register permutes pairs
    std::vector<cplx> v = {1.0, 2.0, 3.0, 4.0};
    const cplx x_mat[4] = {0.0, 1.0, 1.0, 0.0};
    k.apply_1q(v.data(), 2, 0, x_mat);
    CHECK(v[0] == cplx(2.0));
    CHECK(v[1] == cplx(1.0));
    CHECK(v[2] == cplx(4.0));
    CHECK(v[3] == cplx(3.0));
}

TEST_CASE("simd variants match the scalar reference") {
    const auto simd = simd_backends();
    if (simd.empty()) {
        MESSAGE("no SIMD backend available on this host; scalar only");
        return;
    }
    const auto& ref = kernels::get(Backend::scalar);
    Rng rng(20240817);
    for (Backend b : simd) {
        const auto& ops = kernels::get(b);
        CAPTURE(kernels::backend_name(b));
        for (int n_bits : {1, 2, 3, 5, 8, 11}) {
            const std::size_t n = std::size_t{1} << n_bits;
            for (int rep = 0; rep < 4; ++rep) {
                const auto base = random_vec(n, rng);
                cplx m[4];
                for (auto& x : m) x = cplx(rng.normal(), rng.normal());
                for (int t = 0; t < n_bits; ++t) {
                    auto a = base, c = base;
                    ref.apply_1q(a.data(), n_bits, t, m);
                    ops.apply_1q(c.data(), n_bits, t, m);
                    CHECK(max_diff(a, c) < 1e-12);

                    a = base;
                    c = base;
                    const cplx d0(rng.normal(), rng.normal()), d1(rng.normal(), rng.normal());
                    ref.apply_diag1q(a.data(), n_bits, t, d0, d1);
                    ops.apply_diag1q(c.data(), n_bits, t, d0, d1);
                    CHECK(max_diff(a, c) < 1e-12);
                }
                if (n_bits >= 2) {
                    auto a = base, c = base;
                    ref.apply_cx(a.data(), n_bits, 0, n_bits - 1);
                    ops.apply_cx(c.data(), n_bits, 0, n_bits - 1);
                    CHECK(max_diff(a, c) == 0.0);
                }
                const auto other = random_vec(n, rng);
                const cplx alpha(rng.normal(), rng.normal());
                {
                    auto a = base, c = base;
                    ref.axpy(a.data(), other.data(), alpha, n);
                    ops.axpy(c.data(), other.data(), alpha, n);
                    CHECK(max_diff(a, c) < 1e-12);
                }
                {
                    auto a = base, c = base;
                    ref.scale(a.data(), alpha, n);
                    ops.scale(c.data(), alpha, n);
                    CHECK(max_diff(a, c) < 1e-12);
                }
                {
                    const cplx da = ref.cdot(base.data(), other.data(), n);
                    const cplx db = ops.cdot(base.data(), other.data(), n);
                    CHECK(std::abs(da - db) < 1e-10 * (1.0 + std::abs(da)));
                }
            }
        }
    }
}

TEST_CASE("cdot conjugates its first argument") {
    const auto& k = kernels::active();
    std::vector<cplx> a = {cplx(0.0, 1.0)};
    std::vector<cplx> b = {cplx(0.0, 1.0)};
    const cplx d = k.cdot(a.data(), b.data(), 1);
    CHECK(std::abs(d - cplx(1.0, 0.0)) < 1e-15);
}

TEST_CASE("backend selection is overridable") {
    const Backend initial = kernels::active_backend();
    kernels::set_backend(Backend::scalar);
    CHECK(kernels::active_backend() == Backend::scalar);
    kernels::set_backend(initial);
    CHECK(kernels::active_backend() == initial);
    CHECK_THROWS_AS(kernels::get(static_cast<Backend>(250)), InputError);
}
