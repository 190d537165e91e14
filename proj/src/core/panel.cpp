#include "tsagent/core/panel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

#include "tsagent/core/error.hpp"

namespace tsagent {

SeriesPanel::SeriesPanel(std::vector<Series> series, Frequency freq) : series_(std::move(series)), freq_(freq) {
    std::unordered_set<std::string_view> seen;
    for (const Series& s : series_) {
        if (s.id.empty()) throw Error(ErrorCategory::schema, "series id must be non-empty");
        if (!seen.insert(s.id).second) throw Error(ErrorCategory::duplicate, "series id '" + s.id + "' appears twice");
        if (s.y.empty()) throw Error(ErrorCategory::insufficient_data, "series '" + s.id + "' is empty");
        if (s.ds.size() != s.y.size()) {
            throw Error(ErrorCategory::schema, "series '" + s.id + "' has mismatched timestamp/value lengths");
        }
        for (std::size_t i = 0; i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i])) {
                throw Error(ErrorCategory::parse, "series '" + s.id + "' has a missing or non-finite value at " +
                                                      format_timestamp(s.ds[i]));
            }
            if (i > 0 && s.ds[i] <= s.ds[i - 1]) {
                throw Error(ErrorCategory::frequency, "series '" + s.id + "' timestamps are not strictly increasing");
            }
        }
        if (!on_grid(s.ds, freq_)) {
            throw Error(ErrorCategory::frequency, "series '" + s.id + "' is not on a regular " +
                                                      std::string(freq_.name()) + " grid (gap or irregular spacing)");
        }
    }
}

const Series* SeriesPanel::find(std::string_view id) const {
    auto it = std::find_if(series_.begin(), series_.end(), [&](const Series& s) { return s.id == id; });
    return it == series_.end() ? nullptr : &*it;
}

QuantileLevels::QuantileLevels() : levels_{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9} {}

QuantileLevels::QuantileLevels(std::vector<double> levels) : levels_(std::move(levels)) {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (!(levels_[i] > 0.0 && levels_[i] < 1.0)) {
            throw Error(ErrorCategory::invalid_argument, "quantile level must lie in (0,1)");
        }
        if (i > 0 && !(levels_[i] > levels_[i - 1])) {
            throw Error(ErrorCategory::invalid_argument, "quantile levels must be strictly increasing");
        }
    }
}

std::optional<std::size_t> QuantileLevels::index_of(double level) const {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (std::abs(levels_[i] - level) < 1e-12) return i;
    }
    return std::nullopt;
}

std::string quantile_column_name(double level) {
    const double pct = std::round(level * 100.0 * 1e9) / 1e9;
    char buf[32];
    std::snprintf(buf, sizeof buf, "q%.10g", pct);
    return buf;
}

const SeriesForecast* ForecastFrame::find(std::string_view id) const {
    auto it = std::find_if(series.begin(), series.end(), [&](const SeriesForecast& s) { return s.id == id; });
    return it == series.end() ? nullptr : &*it;
}

void check_frame_shape(const ForecastFrame& frame) {
    for (const SeriesForecast& s : frame.series) {
        if (s.ds.size() != s.mean.size()) {
            throw Error(ErrorCategory::alignment, "frame '" + frame.model + "' series '" + s.id +
                                                      "' has mismatched timestamp/point lengths");
        }
        if (s.has_quantiles() && s.quantiles.size() != s.mean.size() * frame.levels.size()) {
            throw Error(ErrorCategory::alignment, "frame '" + frame.model + "' series '" + s.id +
                                                      "' quantile matrix does not match h x levels");
        }
    }
}

}  // namespace tsagent
