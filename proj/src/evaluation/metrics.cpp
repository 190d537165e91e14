#include "tsagent/evaluation/metrics.hpp"

#include <cmath>
#include <vector>

#include "tsagent/core/error.hpp"
#include "tsagent/kernels/kernels.hpp"

namespace tsagent::evaluation {

std::optional<double> mase(std::span<const double> actuals, std::span<const double> forecasts,
                           std::span<const double> train, int m) {
    if (actuals.size() != forecasts.size()) {
        throw Error(ErrorCategory::invalid_argument, "mase: " + std::to_string(actuals.size()) + " actuals vs " +
                                                         std::to_string(forecasts.size()) + " forecasts");
    }
    if (actuals.empty()) throw Error(ErrorCategory::invalid_argument, "mase: empty evaluation window");
    if (m < 1) throw Error(ErrorCategory::invalid_argument, "mase: season length must be >= 1");
    const auto lag = static_cast<std::size_t>(m);
    if (train.size() <= lag) return std::nullopt;

    const double scale = kernels::sum_abs_diff(train.subspan(lag), train.first(train.size() - lag)) /
                         static_cast<double>(train.size() - lag);
    if (!(scale > 0.0)) return std::nullopt;
    const double mae = kernels::sum_abs_diff(actuals, forecasts) / static_cast<double>(actuals.size());
    return mae / scale;
}

double pinball(double actual, double predicted, double tau) {
    return actual >= predicted ? tau * (actual - predicted) : (1.0 - tau) * (predicted - actual);
}

double crps_approx(std::span<const double> actuals, std::span<const double> quantiles, const QuantileLevels& levels) {
    const std::size_t nl = levels.size();
    if (nl == 0) throw Error(ErrorCategory::invalid_argument, "crps: at least one quantile level is required");
    if (actuals.empty()) throw Error(ErrorCategory::invalid_argument, "crps: empty evaluation window");
    if (quantiles.size() != actuals.size() * nl) {
        throw Error(ErrorCategory::invalid_argument, "crps: quantile matrix does not match steps x levels");
    }
    // Column-wise so each level is one contiguous pinball reduction.
    std::vector<double> column(actuals.size());
    double total = 0.0;
    for (std::size_t j = 0; j < nl; ++j) {
        for (std::size_t k = 0; k < actuals.size(); ++k) column[k] = quantiles[k * nl + j];
        total += kernels::pinball_sum(actuals, column, levels[j]);
    }
    return 2.0 / static_cast<double>(nl) * total / static_cast<double>(actuals.size());
}

double coverage(std::span<const double> actuals, std::span<const double> quantiles, const QuantileLevels& levels,
                double lower, double upper) {
    const auto lo = levels.index_of(lower);
    const auto hi = levels.index_of(upper);
    if (!lo || !hi) throw Error(ErrorCategory::invalid_argument, "coverage: requested level is not in the frame");
    if (!(lower < upper)) throw Error(ErrorCategory::invalid_argument, "coverage: lower level must be below upper");
    const std::size_t nl = levels.size();
    if (actuals.empty() || quantiles.size() != actuals.size() * nl) {
        throw Error(ErrorCategory::invalid_argument, "coverage: quantile matrix does not match steps x levels");
    }
    std::size_t inside = 0;
    for (std::size_t k = 0; k < actuals.size(); ++k) {
        if (quantiles[k * nl + *lo] <= actuals[k] && actuals[k] <= quantiles[k * nl + *hi]) ++inside;
    }
    return static_cast<double>(inside) / static_cast<double>(actuals.size());
}

}  // namespace tsagent::evaluation
