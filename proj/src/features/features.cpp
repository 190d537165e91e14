#include "tsagent/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "tsagent/core/csv.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/core/parallel.hpp"
#include "tsagent/kernels/kernels.hpp"

namespace tsagent::features {

namespace {

struct MovingAverage {
    std::vector<double> values;  // NaN where undefined
    std::size_t first = 0;
    std::size_t last = 0;  // inclusive
};

int trend_window_for_nonseasonal(std::size_t n) {
    int w = static_cast<int>(std::min<std::size_t>(9, n));
    if (w % 2 == 0) --w;
    return w;
}

MovingAverage centered_moving_average(std::span<const double> y, int m) {
    const std::size_t n = y.size();
    MovingAverage ma;
    ma.values.assign(n, std::numeric_limits<double>::quiet_NaN());
    const bool even = m % 2 == 0;
    const std::size_t half = even ? static_cast<std::size_t>(m / 2) : static_cast<std::size_t>((m - 1) / 2);
    ma.first = half;
    ma.last = n - 1 - half;
    for (std::size_t t = half; t + half < n; ++t) {
        double acc = 0.0;
        if (even) {
            acc = 0.5 * y[t - half] + 0.5 * y[t + half];
            for (std::size_t i = t - half + 1; i < t + half; ++i) acc += y[i];
        } else {
            for (std::size_t i = t - half; i <= t + half; ++i) acc += y[i];
        }
        ma.values[t] = acc / m;
    }
    return ma;
}

// Variances below this are treated as exactly zero; scaling with the data
// keeps the strength measures scale invariant.
bool negligible(double var, std::span<const double> reference) {
    double scale = 0.0;
    for (double v : reference) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(scale, 1e-300);
    return var <= tol * tol;
}

bool all_equal(std::span<const double> y) {
    return std::adjacent_find(y.begin(), y.end(), std::not_equal_to<>()) == y.end();
}

double strength(const std::vector<double>& component, const std::vector<double>& remainder,
                std::span<const double> reference) {
    std::vector<double> combined(component.size());
    for (std::size_t i = 0; i < combined.size(); ++i) combined[i] = component[i] + remainder[i];
    const double var_combined = variance(combined);
    if (negligible(var_combined, reference)) return 0.0;
    return std::max(0.0, 1.0 - variance(remainder) / var_combined);
}

}  // namespace

double variance(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double mean = kernels::sum(x) / static_cast<double>(x.size());
    return kernels::sum_sq_dev(x, mean) / static_cast<double>(x.size());
}

std::size_t min_decomposition_length(int m) { return m > 1 ? 2 * static_cast<std::size_t>(m) : 3; }

Decomposition decompose(std::span<const double> y, int m) {
    if (m < 1) throw Error(ErrorCategory::invalid_argument, "season length must be >= 1");
    const std::size_t n = y.size();
    if (n < min_decomposition_length(m)) {
        throw Error(ErrorCategory::insufficient_data, "decomposition with season length " + std::to_string(m) +
                                                          " needs at least " +
                                                          std::to_string(min_decomposition_length(m)) +
                                                          " observations, got " + std::to_string(n));
    }
    const int window = m > 1 ? m : trend_window_for_nonseasonal(n);
    MovingAverage ma = centered_moving_average(y, window);

    Decomposition d;
    d.season_length = m;
    d.seasonal.assign(n, 0.0);
    if (m > 1) {
        std::vector<double> phase_sum(m, 0.0);
        std::vector<int> phase_count(m, 0);
        for (std::size_t t = ma.first; t <= ma.last; ++t) {
            phase_sum[t % m] += y[t] - ma.values[t];
            ++phase_count[t % m];
        }
        std::vector<double> phase_mean(m);
        for (int j = 0; j < m; ++j) phase_mean[j] = phase_sum[j] / phase_count[j];
        const double center = kernels::scalar::sum(phase_mean) / m;
        for (double& v : phase_mean) v -= center;
        for (std::size_t t = 0; t < n; ++t) d.seasonal[t] = phase_mean[t % m];
    }

    d.trend = std::move(ma.values);
    for (std::size_t t = 0; t < ma.first; ++t) d.trend[t] = d.trend[ma.first];
    for (std::size_t t = ma.last + 1; t < n; ++t) d.trend[t] = d.trend[ma.last];

    d.remainder.resize(n);
    for (std::size_t t = 0; t < n; ++t) d.remainder[t] = y[t] - d.trend[t] - d.seasonal[t];
    return d;
}

std::vector<double> multiplicative_indices(std::span<const double> y, int m) {
    if (m < 2 || y.size() < 2 * static_cast<std::size_t>(m)) {
        throw Error(ErrorCategory::insufficient_data, "multiplicative indices need m >= 2 and length >= 2m");
    }
    if (std::any_of(y.begin(), y.end(), [](double v) { return v <= 0.0; })) {
        throw Error(ErrorCategory::invalid_argument, "multiplicative indices need strictly positive values");
    }
    const MovingAverage ma = centered_moving_average(y, m);
    std::vector<double> sum(m, 0.0);
    std::vector<int> count(m, 0);
    for (std::size_t t = ma.first; t <= ma.last; ++t) {
        sum[t % m] += y[t] / ma.values[t];
        ++count[t % m];
    }
    std::vector<double> idx(m);
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
        idx[j] = sum[j] / count[j];
        total += idx[j];
    }
    for (double& v : idx) v *= m / total;
    return idx;
}

double trend_strength(const Decomposition& d) {
    std::vector<double> reference(d.trend.size());
    for (std::size_t i = 0; i < reference.size(); ++i) reference[i] = d.trend[i] + d.seasonal[i] + d.remainder[i];
    return strength(d.trend, d.remainder, reference);
}

double seasonal_strength(const Decomposition& d) {
    if (d.season_length <= 1) return 0.0;
    std::vector<double> reference(d.trend.size());
    for (std::size_t i = 0; i < reference.size(); ++i) reference[i] = d.trend[i] + d.seasonal[i] + d.remainder[i];
    return strength(d.seasonal, d.remainder, reference);
}

double acf(std::span<const double> y, int lag) {
    if (lag < 1) throw Error(ErrorCategory::invalid_argument, "acf lag must be >= 1");
    const std::size_t n = y.size();
    if (n <= static_cast<std::size_t>(lag)) {
        throw Error(ErrorCategory::insufficient_data,
                    "acf at lag " + std::to_string(lag) + " needs more than " + std::to_string(lag) + " observations");
    }
    if (all_equal(y)) return 0.0;
    const double mean = kernels::sum(y) / static_cast<double>(n);
    const double denom = kernels::sum_sq_dev(y, mean);
    if (negligible(denom / static_cast<double>(n), y)) return 0.0;
    const auto l = static_cast<std::size_t>(lag);
    const double num = kernels::centered_dot(y.subspan(l), y.first(n - l), mean);
    return std::clamp(num / denom, -1.0, 1.0);
}

KpssResult kpss(std::span<const double> y) {
    const std::size_t n = y.size();
    if (n < 10) {
        throw Error(ErrorCategory::insufficient_data, "KPSS needs at least 10 observations, got " + std::to_string(n));
    }
    KpssResult result;
    result.bandwidth = static_cast<int>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    if (all_equal(y)) return result;

    const double nd = static_cast<double>(n);
    const double mean = kernels::sum(y) / nd;
    std::vector<double> e(n);
    for (std::size_t t = 0; t < n; ++t) e[t] = y[t] - mean;

    double partial = 0.0;
    double sum_sq_partial = 0.0;
    for (double v : e) {
        partial += v;
        sum_sq_partial += partial * partial;
    }

    double long_run = kernels::sum_sq_dev(e, 0.0) / nd;
    if (negligible(long_run, y)) return result;
    for (int lag = 1; lag <= result.bandwidth; ++lag) {
        const auto l = static_cast<std::size_t>(lag);
        const double gamma = kernels::centered_dot(std::span<const double>(e).subspan(l),
                                                   std::span<const double>(e).first(n - l), 0.0) /
                             nd;
        long_run += 2.0 * (1.0 - lag / (result.bandwidth + 1.0)) * gamma;
    }
    if (!(long_run > 0.0)) return result;
    result.statistic = sum_sq_partial / (nd * nd) / long_run;
    result.level_stationary = result.statistic < kKpssCritical5;
    return result;
}

const SeriesFeatures* FeatureReport::find(std::string_view id) const {
    auto it = std::find_if(rows.begin(), rows.end(), [&](const SeriesFeatures& r) { return r.id == id; });
    return it == rows.end() ? nullptr : &*it;
}

SeriesFeatures compute_series_features(const SeriesView& series) {
    const auto y = series.y;
    SeriesFeatures f;
    f.id = std::string(series.id);
    f.n = y.size();
    f.season_length = series.freq.season_length;
    if (y.empty()) return f;

    const double nd = static_cast<double>(f.n);
    f.mean = kernels::sum(y) / nd;
    f.intermittency = static_cast<double>(std::count(y.begin(), y.end(), 0.0)) / nd;
    if (f.n > 1 && f.mean != 0.0) {
        const double sd = std::sqrt(kernels::sum_sq_dev(y, f.mean) / (nd - 1.0));
        f.coefficient_of_variation = sd / std::abs(f.mean);
    }
    if (f.n > 1) f.acf1 = acf(y, 1);
    if (f.n >= min_decomposition_length(f.season_length)) {
        const Decomposition d = decompose(y, f.season_length);
        f.trend_strength = trend_strength(d);
        f.seasonal_strength = seasonal_strength(d);
    }
    if (f.n >= 10) {
        const KpssResult k = kpss(y);
        f.kpss_stat = k.statistic;
        f.kpss_level_stationary = k.level_stationary;
    }
    return f;
}

FeatureReport compute_features(const SeriesPanel& panel, std::size_t jobs) {
    FeatureReport report;
    report.rows.resize(panel.size());
    parallel_for(panel.size(), jobs, [&](std::size_t i) { report.rows[i] = compute_series_features(panel.view(i)); });
    return report;
}

void write_feature_csv(std::ostream& out, const FeatureReport& report) {
    write_csv_row(out, {"unique_id", "n", "season_length", "trend_strength", "seasonal_strength", "acf1", "kpss_stat",
                        "kpss_level_stationary", "intermittency", "mean", "coefficient_of_variation"});
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
    for (const SeriesFeatures& r : report.rows) {
        write_csv_row(out, {r.id, std::to_string(r.n), std::to_string(r.season_length), opt(r.trend_strength),
                            opt(r.seasonal_strength), opt(r.acf1), opt(r.kpss_stat),
                            r.kpss_level_stationary ? (*r.kpss_level_stationary ? "true" : "false") : "",
                            format_number(r.intermittency), format_number(r.mean),
                            opt(r.coefficient_of_variation)});
    }
}

}  // namespace tsagent::features
