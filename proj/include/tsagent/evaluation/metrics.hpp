#pragma once

#include <optional>
#include <span>

#include "tsagent/core/panel.hpp"

namespace tsagent::evaluation {

/// Mean absolute error scaled by the in-sample mean absolute m-step difference of `train`.
/// Empty optional when the scale is zero or `train` has no m-step differences.
std::optional<double> mase(std::span<const double> actuals, std::span<const double> forecasts,
                           std::span<const double> train, int m);

/// tau (y - yhat) when y >= yhat, (1 - tau)(yhat - y) otherwise.
double pinball(double actual, double predicted, double tau);

/// Mean over steps of (2/|levels|) sum_tau pinball(y, q_tau, tau); `quantiles` is row-major
/// steps x |levels|. Unnormalized; leaderboard aggregation divides by mean |y|.
double crps_approx(std::span<const double> actuals, std::span<const double> quantiles, const QuantileLevels& levels);

/// Fraction of steps with q_lower <= y <= q_upper. Both levels must be present.
double coverage(std::span<const double> actuals, std::span<const double> quantiles, const QuantileLevels& levels,
                double lower, double upper);

}  // namespace tsagent::evaluation
