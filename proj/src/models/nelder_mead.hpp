#pragma once

// Derivative-free minimizer used by the ARIMA conditional-sum-of-squares fit.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace tsagent::models::detail {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

inline NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> start, const std::vector<double>& step,
                                    int max_evaluations = 4000, double tolerance = 1e-10) {
    const std::size_t dim = start.size();
    NelderMeadResult result;
    if (dim == 0) {
        result.x = start;
        result.value = f(start);
        result.evaluations = 1;
        return result;
    }

    std::vector<std::vector<double>> simplex(dim + 1, start);
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += step[i];
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    while (evals < max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[dim - 1];
        if (std::abs(values[worst] - values[best]) <= tolerance * (std::abs(values[best]) + tolerance)) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        for (std::size_t j = 0; j < dim; ++j) trial[j] = centroid[j] + (centroid[j] - simplex[worst][j]);
        const double reflected = eval(trial);
        if (reflected < values[best]) {
            for (std::size_t j = 0; j < dim; ++j) trial2[j] = centroid[j] + 2.0 * (centroid[j] - simplex[worst][j]);
            const double expanded = eval(trial2);
            if (expanded < reflected) {
                simplex[worst] = trial2;
                values[worst] = expanded;
            } else {
                simplex[worst] = trial;
                values[worst] = reflected;
            }
            continue;
        }
        if (reflected < values[second]) {
            simplex[worst] = trial;
            values[worst] = reflected;
            continue;
        }
        const bool outside = reflected < values[worst];
        for (std::size_t j = 0; j < dim; ++j) {
            trial2[j] = outside ? centroid[j] + 0.5 * (trial[j] - centroid[j])
                                : centroid[j] + 0.5 * (simplex[worst][j] - centroid[j]);
        }
        const double contracted = eval(trial2);
        if (contracted < std::min(reflected, values[worst])) {
            simplex[worst] = trial2;
            values[worst] = contracted;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < dim; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            values[i] = eval(simplex[i]);
        }
    }
    const auto it = std::min_element(values.begin(), values.end());
    result.x = simplex[static_cast<std::size_t>(it - values.begin())];
    result.value = *it;
    result.evaluations = evals;
    return result;
}

}  // namespace tsagent::models::detail
