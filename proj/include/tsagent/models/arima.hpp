#pragma once

#include <span>
#include <string>
#include <vector>

#include "tsagent/models/forecaster.hpp"

namespace tsagent::models {

/// Seasonal ARIMA(p,d,q)(P,D,Q)_m fitted by conditional sum of squares.
struct ArimaOrder {
    int p = 0, d = 0, q = 0;
    int P = 0, D = 0, Q = 0;
    int season_length = 1;
    bool intercept = false;
    std::vector<double> ar, ma, seasonal_ar, seasonal_ma;
    double mean = 0.0;  ///< mean of the differenced series (drift when d + D = 1)
    double sigma2 = 0.0;
    double aicc = 0.0;
};

std::string arima_label(const ArimaOrder& order);

struct ArimaCandidate {
    int p = 0, q = 0, P = 0, Q = 0;
    bool valid = false;
    double aicc = 0.0;
    std::string note;
};

struct ArimaFit {
    ArimaOrder order;
    std::vector<ArimaCandidate> candidates;
    ModelOutput output;
    bool fallback = false;  ///< no valid candidate; output is the naive forecast
};

/// Number of differences the KPSS cascade asks for (0, 1 or 2).
int kpss_differences(std::span<const double> y);

/// Fits one order on y (differencing included). Returns an order with a NaN aicc when the
/// fit is not stationary/invertible or the likelihood is degenerate.
ArimaOrder fit_arima(std::span<const double> y, int p, int d, int q, int P, int D, int Q, int m, bool intercept);

/// Point forecasts and their standard errors (psi-weight accumulation).
void arima_forecast(std::span<const double> y, const ArimaOrder& order, int h, std::vector<double>& mean,
                    std::vector<double>& sd);

/// True when every root of 1 - c_1 z - ... - c_k z^k lies outside the unit circle.
bool roots_outside_unit_circle(std::span<const double> coefficients);

/// Stepwise order search. d from repeated KPSS, D from seasonal strength >= 0.64,
/// (p,q) <= 3 and (P,Q) <= 1, scored by AICc. Needs length >= 20.
ArimaFit auto_arima(std::span<const double> y, int m, int h, const QuantileLevels& levels);

}  // namespace tsagent::models
