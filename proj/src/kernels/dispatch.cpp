#include <atomic>
#include <cstdlib>
#include <string>

#include "tsagent/kernels/kernels.hpp"

namespace tsagent::kernels {

namespace {

Isa detect() {
    if (const char* env = std::getenv("TSAGENT_FORCE_SCALAR"); env && std::string(env) == "1") return Isa::scalar;
#if defined(TSAGENT_HAVE_AVX2_KERNELS)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
#if defined(TSAGENT_HAVE_NEON_KERNELS)
    return Isa::neon;
#endif
    return Isa::scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(TSAGENT_HAVE_AVX2_KERNELS)
            __builtin_cpu_init();
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(TSAGENT_HAVE_NEON_KERNELS)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool force_isa(Isa isa) {
    if (!isa_supported(isa)) return false;
    current().store(isa, std::memory_order_relaxed);
    return true;
}

#if defined(TSAGENT_HAVE_AVX2_KERNELS)
#define TSAGENT_DISPATCH_AVX2(fn, ...) \
    case Isa::avx2: return avx2::fn(__VA_ARGS__);
#else
#define TSAGENT_DISPATCH_AVX2(fn, ...)
#endif
#if defined(TSAGENT_HAVE_NEON_KERNELS)
#define TSAGENT_DISPATCH_NEON(fn, ...) \
    case Isa::neon: return neon::fn(__VA_ARGS__);
#else
#define TSAGENT_DISPATCH_NEON(fn, ...)
#endif

#define TSAGENT_DISPATCH(fn, ...)              \
    switch (active_isa()) {                    \
        TSAGENT_DISPATCH_AVX2(fn, __VA_ARGS__) \
        TSAGENT_DISPATCH_NEON(fn, __VA_ARGS__) \
        default: return scalar::fn(__VA_ARGS__); \
    }

double sum(std::span<const double> x) { TSAGENT_DISPATCH(sum, x) }

double sum_sq_dev(std::span<const double> x, double center) { TSAGENT_DISPATCH(sum_sq_dev, x, center) }

double centered_dot(std::span<const double> a, std::span<const double> b, double center) {
    TSAGENT_DISPATCH(centered_dot, a, b, center)
}

double sum_abs_diff(std::span<const double> a, std::span<const double> b) { TSAGENT_DISPATCH(sum_abs_diff, a, b) }

double pinball_sum(std::span<const double> actual, std::span<const double> predicted, double tau) {
    TSAGENT_DISPATCH(pinball_sum, actual, predicted, tau)
}

}  // namespace tsagent::kernels
