// Compiled with -mavx2; only reached after a runtime CPU check.

#include <immintrin.h>

#include <cmath>

#include "tsagent/kernels/kernels.hpp"

namespace tsagent::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

}  // namespace

double sum(std::span<const double> x) {
    const std::size_t n = x.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x.data() + i + 4));
    }
    for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x.data() + i));
    double tail = 0.0;
    for (; i < n; ++i) tail += x[i];
    return hsum(_mm256_add_pd(acc0, acc1)) + tail;
}

double sum_sq_dev(std::span<const double> x, double center) {
    const std::size_t n = x.size();
    const __m256d c = _mm256_set1_pd(center);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), c);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(d, d));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double d = x[i] - center;
        tail += d * d;
    }
    return hsum(acc) + tail;
}

double centered_dot(std::span<const double> a, std::span<const double> b, double center) {
    const std::size_t n = a.size();
    const __m256d c = _mm256_set1_pd(center);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d da = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), c);
        const __m256d db = _mm256_sub_pd(_mm256_loadu_pd(b.data() + i), c);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(da, db));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += (a[i] - center) * (b[i] - center);
    return hsum(acc) + tail;
}

double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        acc = _mm256_add_pd(acc, abs_pd(d));
    }
    double tail = 0.0;
    for (; i < n; ++i) tail += std::abs(a[i] - b[i]);
    return hsum(acc) + tail;
}

double pinball_sum(std::span<const double> actual, std::span<const double> predicted, double tau) {
    // pinball(y, q) = max(tau * (y - q), (tau - 1) * (y - q))
    const std::size_t n = actual.size();
    const __m256d t_hi = _mm256_set1_pd(tau);
    const __m256d t_lo = _mm256_set1_pd(tau - 1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(actual.data() + i), _mm256_loadu_pd(predicted.data() + i));
        acc = _mm256_add_pd(acc, _mm256_max_pd(_mm256_mul_pd(t_hi, d), _mm256_mul_pd(t_lo, d)));
    }
    double tail = 0.0;
    for (; i < n; ++i) {
        const double y = actual[i];
        const double q = predicted[i];
        tail += y >= q ? tau * (y - q) : (1.0 - tau) * (q - y);
    }
    return hsum(acc) + tail;
}

}  // namespace tsagent::kernels::avx2
