#include "tsagent/models/forecaster.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "tsagent/core/error.hpp"
#include "tsagent/core/parallel.hpp"

namespace tsagent::models {

double normal_quantile(double p) {
    static const boost::math::normal_distribution<double> standard;
    if (p == 0.5) return 0.0;
    // Evaluate the lower tail and mirror it so that z(p) = -z(1-p) holds to rounding.
    if (p > 0.5) return -boost::math::quantile(standard, 1.0 - p);
    return boost::math::quantile(standard, p);
}

std::vector<double> gaussian_quantiles(std::span<const double> mean, std::span<const double> sd,
                                       const QuantileLevels& levels) {
    std::vector<double> z(levels.size());
    for (std::size_t j = 0; j < levels.size(); ++j) z[j] = normal_quantile(levels[j]);
    std::vector<double> out;
    out.reserve(mean.size() * levels.size());
    for (std::size_t k = 0; k < mean.size(); ++k) {
        for (std::size_t j = 0; j < levels.size(); ++j) out.push_back(mean[k] + z[j] * sd[k]);
    }
    return out;
}

double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double rms(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc / static_cast<double>(x.size()));
}

void check_output_shape(const ModelOutput& out, int h, const QuantileLevels& levels, std::string_view model) {
    const auto expected = static_cast<std::size_t>(h);
    if (out.mean.size() != expected) {
        throw Error(ErrorCategory::protocol, std::string(model) + ": expected " + std::to_string(expected) +
                                                 " point forecasts, received " + std::to_string(out.mean.size()));
    }
    if (!out.quantiles.empty() && out.quantiles.size() != expected * levels.size()) {
        throw Error(ErrorCategory::protocol, std::string(model) + ": expected " +
                                                 std::to_string(expected * levels.size()) +
                                                 " quantile values, received " + std::to_string(out.quantiles.size()));
    }
}

ForecastFrame forecast_panel(const Forecaster& model, const SeriesPanel& panel, int h, const QuantileLevels& levels,
                             std::size_t jobs) {
    if (h < 1) throw Error(ErrorCategory::invalid_argument, "horizon must be >= 1");
    ForecastFrame frame;
    frame.model = model.name();
    frame.levels = model.supports_quantiles() ? levels : QuantileLevels::none();
    frame.series.resize(panel.size());
    std::vector<std::vector<std::string>> warnings(panel.size());

    parallel_for(panel.size(), jobs, [&](std::size_t i) {
        const SeriesView view = panel.view(i);
        ModelOutput out = model.forecast(view, h, levels);
        check_output_shape(out, h, levels, frame.model);
        SeriesForecast& sf = frame.series[i];
        sf.id = std::string(view.id);
        sf.ds = future_grid(view.ds.back(), view.freq, h);
        sf.mean = std::move(out.mean);
        if (model.supports_quantiles()) sf.quantiles = std::move(out.quantiles);
        for (auto& w : out.warnings) warnings[i].push_back(sf.id + ": " + w);
    });
    for (auto& w : warnings) frame.warnings.insert(frame.warnings.end(), w.begin(), w.end());
    return frame;
}

}  // namespace tsagent::models
