#pragma once

#include <span>
#include <string>
#include <vector>

#include "tsagent/core/panel.hpp"
#include "tsagent/models/forecaster.hpp"

namespace tsagent::ensemble {

/// Median of the values; the mean of the central pair for even counts.
double median(std::vector<double> values);

/// Pool-adjacent-violators: the nondecreasing sequence minimizing sum w_i (out_i - in_i)^2.
/// Weights must be positive and the spans of equal, nonzero length.
std::vector<double> pava_isotonic(std::span<const double> values, std::span<const double> weights);

/// Unit-weight PAVA applied in place to every horizon row of the quantile matrix.
void monotonize_rows(SeriesForecast& forecast, std::size_t n_levels);

/// Copy of `frame` with every quantile row made nondecreasing across levels. Points are untouched.
ForecastFrame monotonize_quantiles(ForecastFrame frame);

/// "median_ensemble[a,b,c]"
std::string ensemble_name(std::span<const std::string> members);

/// Elementwise median of aligned frames. Members without quantiles only vote on points;
/// when `levels` is non-empty at least one member must carry quantiles at exactly those levels.
/// Quantile rows of the result are monotonized.
ForecastFrame median_ensemble(const std::vector<ForecastFrame>& frames, const QuantileLevels& levels);

/// Combines the per-member outputs for one series the same way median_ensemble does.
models::ModelOutput median_combine(const std::vector<models::ModelOutput>& outputs,
                                   const std::vector<bool>& has_quantiles, int h, const QuantileLevels& levels);

/// Forecaster running every member on the series and combining with median_combine.
class MedianEnsemble final : public models::Forecaster {
public:
    explicit MedianEnsemble(std::vector<models::ForecasterPtr> members);

    std::string name() const override;
    bool supports_quantiles() const override;
    models::ModelOutput forecast(const SeriesView& series, int h, const QuantileLevels& levels) const override;

    std::span<const models::ForecasterPtr> members() const { return members_; }

private:
    std::vector<models::ForecasterPtr> members_;
};

}  // namespace tsagent::ensemble
