#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tsagent/core/panel.hpp"

namespace tsagent::models {

/// What a model returns for one series: h point forecasts and, when the model
/// supports it, a row-major h x |levels| quantile matrix.
struct ModelOutput {
    std::vector<double> mean;
    std::vector<double> quantiles;
    std::vector<std::string> warnings;
};

/// The single contract every forecaster implements, local or remote.
class Forecaster {
public:
    virtual ~Forecaster() = default;

    virtual std::string name() const = 0;
    virtual bool supports_quantiles() const = 0;

    /// Fits on `series` and forecasts h steps. Must not read anything beyond the view.
    virtual ModelOutput forecast(const SeriesView& series, int h, const QuantileLevels& levels) const = 0;
};

using ForecasterPtr = std::shared_ptr<const Forecaster>;

/// Runs `model` on every series, attaching future timestamps and checking output shapes.
ForecastFrame forecast_panel(const Forecaster& model, const SeriesPanel& panel, int h, const QuantileLevels& levels,
                             std::size_t jobs = 0);

/// Throws Error(protocol) unless the output has h points and, if present, h x |levels| quantiles.
void check_output_shape(const ModelOutput& out, int h, const QuantileLevels& levels, std::string_view model);

/// Standard normal quantile function.
double normal_quantile(double p);

/// mean[k] + z(level) * sd[k] for every (step, level).
std::vector<double> gaussian_quantiles(std::span<const double> mean, std::span<const double> sd,
                                       const QuantileLevels& levels);

/// Linear-interpolation (type 7) sample quantile of sorted data.
double sorted_quantile(std::span<const double> sorted, double p);

/// Root mean square of the values (0 for an empty span).
double rms(std::span<const double> x);

}  // namespace tsagent::models
