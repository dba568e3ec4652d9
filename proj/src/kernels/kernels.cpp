#include "svb/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace svb::kernels {

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

bool available(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(SVB_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const Ops& get(Backend b) {
    switch (b) {
        case Backend::scalar:
            return kScalarOps;
        case Backend::avx2:
#if defined(SVB_HAVE_AVX2)
            if (__builtin_cpu_supports("avx2")) return kAvx2Ops;
#endif
            break;
        case Backend::neon:
#if defined(__aarch64__)
            return kNeonOps;
#endif
            break;
    }
    throw InputError(std::string("kernel backend '") + backend_name(b) + "' unavailable on this host");
}

namespace {

Backend detect() {
    if (const char* env = std::getenv("SVB_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && available(Backend::avx2)) return Backend::avx2;
        if (std::strcmp(env, "neon") == 0 && available(Backend::neon)) return Backend::neon;
        // fall through on unknown/unavailable values
    }
    if (available(Backend::avx2)) return Backend::avx2;
    if (available(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

std::atomic<Backend> g_backend{detect()};

}  // namespace

const Ops& active() { return get(g_backend.load(std::memory_order_relaxed)); }

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    get(b);  // throws if unavailable
    g_backend.store(b, std::memory_order_relaxed);
}

}  // namespace svb::kernels
