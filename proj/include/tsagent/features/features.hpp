#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsagent/core/panel.hpp"

namespace tsagent::features {

/// Classical additive decomposition y = T + S + R.
struct Decomposition {
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> remainder;
    int season_length = 1;
};

/// Smallest series length decompose() accepts for season length m.
std::size_t min_decomposition_length(int m);

/// Trend: centered moving average of width m (2 x m for even m; width min(9, odd <= n)
/// when m = 1), edges filled with the nearest defined value. Seasonal: per-phase
/// means of y - T over indices with a defined trend, re-centered to sum to zero.
Decomposition decompose(std::span<const double> y, int m);

/// Multiplicative seasonal indices (length m, mean 1) from ratios to the centered
/// moving average. Requires strictly positive values and length >= 2m.
std::vector<double> multiplicative_indices(std::span<const double> y, int m);

/// max(0, 1 - Var(R) / Var(T + R)); 0 when Var(T + R) vanishes.
double trend_strength(const Decomposition& d);

/// max(0, 1 - Var(R) / Var(S + R)); 0 when Var(S + R) vanishes.
double seasonal_strength(const Decomposition& d);

/// Sample autocorrelation at `lag`, normalized by the full sum of squares. 0 for constant input.
double acf(std::span<const double> y, int lag);

/// 5% critical value of the level-stationarity KPSS test.
inline constexpr double kKpssCritical5 = 0.463;

struct KpssResult {
    double statistic = 0.0;
    bool level_stationary = true;
    int bandwidth = 0;
};

/// KPSS level-stationarity statistic with a Bartlett long-run variance,
/// bandwidth floor(4 (n/100)^(1/4)). Needs n >= 10.
KpssResult kpss(std::span<const double> y);

/// Diagnostics for one series. Features whose preconditions fail are left empty.
struct SeriesFeatures {
    std::string id;
    std::size_t n = 0;
    int season_length = 1;
    std::optional<double> trend_strength;
    std::optional<double> seasonal_strength;
    std::optional<double> acf1;
    std::optional<double> kpss_stat;
    std::optional<bool> kpss_level_stationary;
    double intermittency = 0.0;
    double mean = 0.0;
    std::optional<double> coefficient_of_variation;
};

struct FeatureReport {
    std::vector<SeriesFeatures> rows;

    const SeriesFeatures* find(std::string_view id) const;
};

SeriesFeatures compute_series_features(const SeriesView& series);

/// One row per series; series are processed in parallel (jobs = 0 uses the default).
FeatureReport compute_features(const SeriesPanel& panel, std::size_t jobs = 0);

/// unique_id,n,season_length,trend_strength,seasonal_strength,acf1,kpss_stat,
/// kpss_level_stationary,intermittency,mean,coefficient_of_variation
void write_feature_csv(std::ostream& out, const FeatureReport& report);

/// Population variance.
double variance(std::span<const double> x);

}  // namespace tsagent::features
