#include <cmath>

#include "tsagent/kernels/kernels.hpp"

namespace tsagent::kernels::scalar {

double sum(std::span<const double> x) {
    double acc = 0.0;
    for (double v : x) acc += v;
    return acc;
}

double sum_sq_dev(std::span<const double> x, double center) {
    double acc = 0.0;
    for (double v : x) {
        const double d = v - center;
        acc += d * d;
    }
    return acc;
}

double centered_dot(std::span<const double> a, std::span<const double> b, double center) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - center) * (b[i] - center);
    return acc;
}

double sum_abs_diff(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
}

double pinball_sum(std::span<const double> actual, std::span<const double> predicted, double tau) {
    double acc = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double y = actual[i];
        const double q = predicted[i];
        acc += y >= q ? tau * (y - q) : (1.0 - tau) * (q - y);
    }
    return acc;
}

}  // namespace tsagent::kernels::scalar
