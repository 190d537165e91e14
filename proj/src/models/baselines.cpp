#include "tsagent/models/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "tsagent/core/error.hpp"
#include "tsagent/features/features.hpp"

namespace tsagent::models {

namespace {

void require_non_empty(std::span<const double> y, const char* model) {
    if (y.empty()) throw Error(ErrorCategory::insufficient_data, std::string(model) + ": empty series");
}

void require_horizon(int h) {
    if (h < 1) throw Error(ErrorCategory::invalid_argument, "horizon must be >= 1");
}

double ses_sse(std::span<const double> y, double alpha) {
    double level = y[0];
    double sse = 0.0;
    for (std::size_t t = 1; t < y.size(); ++t) {
        const double e = y[t] - level;
        sse += e * e;
        level += alpha * e;
    }
    return sse;
}

double flat_ses_level(std::span<const double> y, double alpha) {
    double level = y[0];
    for (std::size_t t = 1; t < y.size(); ++t) level += alpha * (y[t] - level);
    return level;
}

}  // namespace

ModelOutput naive(std::span<const double> y, int h, const QuantileLevels& levels) {
    require_non_empty(y, "naive");
    require_horizon(h);
    std::vector<double> diffs;
    for (std::size_t t = 1; t < y.size(); ++t) diffs.push_back(y[t] - y[t - 1]);
    const double sigma = rms(diffs);

    ModelOutput out;
    out.mean.assign(static_cast<std::size_t>(h), y.back());
    std::vector<double> sd(static_cast<std::size_t>(h));
    for (int k = 1; k <= h; ++k) sd[k - 1] = sigma * std::sqrt(static_cast<double>(k));
    out.quantiles = gaussian_quantiles(out.mean, sd, levels);
    return out;
}

ModelOutput seasonal_naive(std::span<const double> y, int m, int h, const QuantileLevels& levels) {
    require_horizon(h);
    if (m < 1) throw Error(ErrorCategory::invalid_argument, "season length must be >= 1");
    const auto season = static_cast<std::size_t>(m);
    if (y.size() < season) {
        throw Error(ErrorCategory::series_too_short, "seasonalnaive: series of length " + std::to_string(y.size()) +
                                                         " is shorter than the season length " + std::to_string(m));
    }
    std::vector<double> diffs;
    for (std::size_t t = season; t < y.size(); ++t) diffs.push_back(y[t] - y[t - season]);
    const double sigma = rms(diffs);

    const std::size_t n = y.size();
    ModelOutput out;
    std::vector<double> sd;
    for (int k = 1; k <= h; ++k) {
        const std::size_t phase = static_cast<std::size_t>(k - 1) % season;
        out.mean.push_back(y[n - season + phase]);
        const int cycles = (k + m - 1) / m;
        sd.push_back(sigma * std::sqrt(static_cast<double>(cycles)));
    }
    out.quantiles = gaussian_quantiles(out.mean, sd, levels);
    return out;
}

ModelOutput historic_average(std::span<const double> y, int h, const QuantileLevels& levels) {
    require_non_empty(y, "historicaverage");
    require_horizon(h);
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : y) ss += (v - mean) * (v - mean);
    const double sd = y.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;

    ModelOutput out;
    out.mean.assign(static_cast<std::size_t>(h), mean);
    const std::vector<double> sds(static_cast<std::size_t>(h), sd);
    out.quantiles = gaussian_quantiles(out.mean, sds, levels);
    return out;
}

SesFit ses(std::span<const double> y, std::optional<double> alpha) {
    require_non_empty(y, "ses");
    double chosen = 0.0;
    if (alpha) {
        if (!(*alpha >= 0.0 && *alpha <= 1.0)) throw Error(ErrorCategory::invalid_argument, "ses: alpha outside [0,1]");
        chosen = *alpha;
    } else {
        double best = std::numeric_limits<double>::infinity();
        for (int i = 1; i <= 99; ++i) {
            const double a = i / 100.0;
            const double sse = ses_sse(y, a);
            if (sse < best) {
                best = sse;
                chosen = a;
            }
        }
    }

    SesFit fit;
    fit.fitted.resize(y.size());
    double level = y[0];
    fit.fitted[0] = y[0];
    std::vector<double> errors;
    for (std::size_t t = 1; t < y.size(); ++t) {
        fit.fitted[t] = level;
        const double e = y[t] - level;
        errors.push_back(e);
        level += chosen * e;
    }
    fit.state = {chosen, level, rms(errors)};
    return fit;
}

ModelOutput ses_forecast(std::span<const double> y, int h, const QuantileLevels& levels) {
    require_horizon(h);
    const SesFit fit = ses(y);
    ModelOutput out;
    out.mean.assign(static_cast<std::size_t>(h), fit.state.level);
    std::vector<double> sd;
    for (int k = 1; k <= h; ++k) {
        sd.push_back(fit.state.residual_sd * std::sqrt(1.0 + (k - 1) * fit.state.alpha * fit.state.alpha));
    }
    out.quantiles = gaussian_quantiles(out.mean, sd, levels);
    return out;
}

ThetaFit theta_fit(std::span<const double> y, int m, int h, const QuantileLevels& levels) {
    require_horizon(h);
    if (y.size() < 4) {
        throw Error(ErrorCategory::insufficient_data, "theta: needs at least 4 observations, got " +
                                                          std::to_string(y.size()));
    }
    const std::size_t n = y.size();
    ThetaFit fit;

    std::vector<double> work(y.begin(), y.end());
    if (m > 1 && n >= 2 * static_cast<std::size_t>(m) &&
        std::all_of(y.begin(), y.end(), [](double v) { return v > 0.0; })) {
        const features::Decomposition d = features::decompose(y, m);
        if (features::seasonal_strength(d) >= 0.6) {
            fit.seasonal_adjusted = true;
            fit.seasonal_indices = features::multiplicative_indices(y, m);
            for (std::size_t t = 0; t < n; ++t) work[t] /= fit.seasonal_indices[t % m];
        }
    }

    // OLS on t = 1..n
    const double nd = static_cast<double>(n);
    const double t_mean = (nd + 1.0) / 2.0;
    double y_mean = 0.0;
    for (double v : work) y_mean += v;
    y_mean /= nd;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = static_cast<double>(i + 1) - t_mean;
        sxy += dt * (work[i] - y_mean);
        sxx += dt * dt;
    }
    fit.slope = sxy / sxx;
    fit.intercept = y_mean - fit.slope * t_mean;

    std::vector<double> theta2(n);
    for (std::size_t i = 0; i < n; ++i) {
        theta2[i] = 2.0 * work[i] - (fit.intercept + fit.slope * static_cast<double>(i + 1));
    }
    const SesFit s = ses(theta2);
    fit.ses = s.state;

    std::vector<double> errors;
    for (std::size_t i = 1; i < n; ++i) {
        const double fitted = 0.5 * (fit.intercept + fit.slope * static_cast<double>(i + 1)) + 0.5 * s.fitted[i];
        errors.push_back(work[i] - fitted);
    }
    const double sigma = rms(errors);

    std::vector<double> mean, sd;
    for (int k = 1; k <= h; ++k) {
        mean.push_back(0.5 * (fit.intercept + fit.slope * (nd + k)) + 0.5 * s.state.level);
        sd.push_back(sigma * std::sqrt(1.0 + (k - 1) * s.state.alpha * s.state.alpha));
    }
    std::vector<double> quantiles = gaussian_quantiles(mean, sd, levels);
    if (fit.seasonal_adjusted) {
        const std::size_t nl = levels.size();
        for (int k = 1; k <= h; ++k) {
            const double idx = fit.seasonal_indices[(n + static_cast<std::size_t>(k) - 1) % m];
            mean[k - 1] *= idx;
            for (std::size_t j = 0; j < nl; ++j) quantiles[(k - 1) * nl + j] *= idx;
        }
    }
    fit.output.mean = std::move(mean);
    fit.output.quantiles = std::move(quantiles);
    return fit;
}

ModelOutput theta(std::span<const double> y, int m, int h, const QuantileLevels& levels) {
    return theta_fit(y, m, h, levels).output;
}

std::vector<double> demand_intervals(std::span<const double> y) {
    std::vector<double> intervals;
    std::size_t last = 0;  // position one before the series start
    for (std::size_t t = 0; t < y.size(); ++t) {
        if (y[t] != 0.0) {
            intervals.push_back(static_cast<double>(t + 1 - last));
            last = t + 1;
        }
    }
    return intervals;
}

ModelOutput croston(std::span<const double> y, int h, CrostonVariant variant) {
    require_non_empty(y, variant == CrostonVariant::classic ? "croston" : "adida");
    require_horizon(h);
    ModelOutput out;
    std::vector<double> sizes;
    for (double v : y) {
        if (v != 0.0) sizes.push_back(v);
    }
    const std::vector<double> intervals = demand_intervals(y);
    if (sizes.empty()) {
        out.mean.assign(static_cast<std::size_t>(h), 0.0);
        return out;
    }

    double rate = 0.0;
    if (variant == CrostonVariant::classic) {
        const double size_level = flat_ses_level(sizes, kCrostonAlpha);
        const double interval_level = flat_ses_level(intervals, kCrostonAlpha);
        rate = size_level / interval_level;
    } else {
        double mean_interval = 0.0;
        for (double q : intervals) mean_interval += q;
        mean_interval /= static_cast<double>(intervals.size());
        const auto width = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(mean_interval)));
        const std::size_t buckets = y.size() / width;
        // Buckets are aligned to the end of the series so the latest data is used.
        const std::size_t start = y.size() - buckets * width;
        std::vector<double> totals(buckets, 0.0);
        for (std::size_t b = 0; b < buckets; ++b) {
            for (std::size_t i = 0; i < width; ++i) totals[b] += y[start + b * width + i];
        }
        rate = ses(totals).state.level / static_cast<double>(width);
    }
    out.mean.assign(static_cast<std::size_t>(h), rate);
    return out;
}

}  // namespace tsagent::models
