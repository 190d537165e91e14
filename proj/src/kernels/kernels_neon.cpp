#include <arm_neon.h>

#include <cmath>

#include "tsagent/kernels/kernels.hpp"

namespace tsagent::kernels::neon {

double sum(std::span<const double> x) {
    const std::size_t n = x.size();
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vld1q_f64(x.data() + i));
        acc1 = vaddq_f64(acc1, vld1q_f64(x.data() + i + 2));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i];
    return vaddvq_f64(vaddq_f64(acc0, acc1)) + tail;
}

double sum_sq_dev(std::span<const double> x, double center) {
    const std::size_t n = x.size();
    const float64x2_t c = vdupq_n_f64(center);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(x.data() + i), c);
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = x[i] - center;
        tail += d * d;
    }
    return vaddvq_f64(acc) + tail;
}

double centered_dot(std::span<const double> a, std::span<const double> b, double center) {
    const std::size_t n = a.size();
    const float64x2_t c = vdupq_n_f64(center);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t da = vsubq_f64(vld1q_f64(a.data() + i), c);
        const float64x2_t db = vsubq_f64(vld1q_f64(b.data() + i), c);
        acc = vaddq_f64(acc, vmulq_f64(da, db));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += (a[i] - center) * (b[i] - center);
    return vaddvq_f64(acc) + tail;
}

double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += std::abs(a[i] - b[i]);
    return vaddvq_f64(acc) + tail;
}

double pinball_sum(std::span<const double> actual, std::span<const double> predicted, double tau) {
    const std::size_t n = actual.size();
    const float64x2_t t_hi = vdupq_n_f64(tau);
    const float64x2_t t_lo = vdupq_n_f64(tau - 1.0);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(actual.data() + i), vld1q_f64(predicted.data() + i));
        acc = vaddq_f64(acc, vmaxq_f64(vmulq_f64(t_hi, d), vmulq_f64(t_lo, d)));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double y = actual[i];
        const double q = predicted[i];
        tail += y >= q ? tau * (y - q) : (1.0 - tau) * (q - y);
    }
    return vaddvq_f64(acc) + tail;
}

}  // namespace tsagent::kernels::neon
