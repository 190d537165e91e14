#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tsagent/core/panel.hpp"
#include "tsagent/models/forecaster.hpp"

namespace tsagent::models {

/// Last value carried forward. Quantiles: y_n + z * sigma * sqrt(k), sigma = RMS of one-step differences.
ModelOutput naive(std::span<const double> y, int h, const QuantileLevels& levels);

/// Value one season earlier, wrapping periodically. Sigma = RMS of seasonal differences, grown by sqrt(ceil(k/m)).
ModelOutput seasonal_naive(std::span<const double> y, int m, int h, const QuantileLevels& levels);

/// Sample mean with a constant-width band from the sample standard deviation.
ModelOutput historic_average(std::span<const double> y, int h, const QuantileLevels& levels);

/// Simple exponential smoothing state after the last observation.
struct SesState {
    double alpha = 0.0;
    double level = 0.0;
    double residual_sd = 0.0;  ///< RMS of in-sample one-step errors
};

struct SesFit {
    SesState state;
    /// fitted[t] is the one-step forecast of y[t]; fitted[0] = y[0].
    std::vector<double> fitted;
};

/// Level starts at y[0]. Without `alpha`, picks alpha in {0.01, ..., 0.99} minimizing one-step SSE.
SesFit ses(std::span<const double> y, std::optional<double> alpha = std::nullopt);

/// Flat SES forecast with sd_k = sigma * sqrt(1 + (k-1) alpha^2).
ModelOutput ses_forecast(std::span<const double> y, int h, const QuantileLevels& levels);

/// Details of a theta fit, mostly for inspection in tests.
struct ThetaFit {
    bool seasonal_adjusted = false;
    std::vector<double> seasonal_indices;  ///< empty unless seasonal_adjusted
    double intercept = 0.0;
    double slope = 0.0;
    SesState ses;
    ModelOutput output;
};

/// Two-line theta method: half the OLS trend plus half the SES forecast of the
/// theta=2 line, on multiplicatively deseasonalized data when seasonality is strong.
ThetaFit theta_fit(std::span<const double> y, int m, int h, const QuantileLevels& levels);
ModelOutput theta(std::span<const double> y, int m, int h, const QuantileLevels& levels);

enum class CrostonVariant { classic, adida };

/// Intermittent-demand point forecasts (no quantiles). Smoothing constant fixed at 0.1 for
/// the classic variant; ADIDA smooths bucket totals with an optimized SES.
ModelOutput croston(std::span<const double> y, int h, CrostonVariant variant);

/// Intervals between successive nonzero values, the first measured from the start of the series.
std::vector<double> demand_intervals(std::span<const double> y);

inline constexpr double kCrostonAlpha = 0.1;

}  // namespace tsagent::models
