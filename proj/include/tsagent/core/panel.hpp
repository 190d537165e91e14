#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsagent/core/time.hpp"

namespace tsagent {

/// One univariate series: strictly increasing timestamps on the panel grid.
struct Series {
    std::string id;
    std::vector<Timestamp> ds;
    std::vector<double> y;

    std::size_t size() const noexcept { return y.size(); }

    friend bool operator==(const Series&, const Series&) = default;
};

/// Borrowed view of a series, handed to forecasters.
struct SeriesView {
    std::string_view id;
    std::span<const Timestamp> ds;
    std::span<const double> y;
    Frequency freq;

    SeriesView() = default;
    SeriesView(const Series& s, Frequency f) : id(s.id), ds(s.ds), y(s.y), freq(f) {}
    SeriesView(std::string_view id_, std::span<const Timestamp> ds_, std::span<const double> y_, Frequency f)
        : id(id_), ds(ds_), y(y_), freq(f) {}

    /// First `n` observations.
    SeriesView head(std::size_t n) const { return {id, ds.first(n), y.first(n), freq}; }
};

/// Keyed collection of series sharing one frequency. Immutable once built.
class SeriesPanel {
public:
    SeriesPanel() = default;

    /// Validates keys, ordering, grid membership and finiteness; throws tsagent::Error.
    SeriesPanel(std::vector<Series> series, Frequency freq);

    Frequency frequency() const noexcept { return freq_; }
    std::span<const Series> series() const noexcept { return series_; }
    std::size_t size() const noexcept { return series_.size(); }
    bool empty() const noexcept { return series_.empty(); }

    const Series& operator[](std::size_t i) const { return series_[i]; }
    const Series* find(std::string_view id) const;
    SeriesView view(std::size_t i) const { return {series_[i], freq_}; }

    friend bool operator==(const SeriesPanel&, const SeriesPanel&) = default;

private:
    std::vector<Series> series_;
    Frequency freq_{};
};

/// Strictly increasing quantile levels inside (0, 1).
class QuantileLevels {
public:
    /// The nine deciles 0.1 ... 0.9.
    QuantileLevels();
    explicit QuantileLevels(std::vector<double> levels);
    QuantileLevels(std::initializer_list<double> levels) : QuantileLevels(std::vector<double>(levels)) {}

    static QuantileLevels none() { return QuantileLevels(std::vector<double>{}); }

    std::span<const double> values() const noexcept { return levels_; }
    std::size_t size() const noexcept { return levels_.size(); }
    bool empty() const noexcept { return levels_.empty(); }
    double operator[](std::size_t i) const { return levels_[i]; }
    std::optional<std::size_t> index_of(double level) const;

    friend bool operator==(const QuantileLevels&, const QuantileLevels&) = default;

private:
    std::vector<double> levels_;
};

/// Column label for a level: 0.1 -> "q10", 0.025 -> "q2.5".
std::string quantile_column_name(double level);

/// Forecast for one series. `quantiles` is row-major h x |levels|, or empty.
struct SeriesForecast {
    std::string id;
    std::vector<Timestamp> ds;
    std::vector<double> mean;
    std::vector<double> quantiles;

    std::size_t horizon() const noexcept { return mean.size(); }
    bool has_quantiles() const noexcept { return !quantiles.empty(); }

    std::span<const double> quantile_row(std::size_t step, std::size_t n_levels) const {
        return std::span<const double>(quantiles).subspan(step * n_levels, n_levels);
    }
    std::span<double> quantile_row(std::size_t step, std::size_t n_levels) {
        return std::span<double>(quantiles).subspan(step * n_levels, n_levels);
    }
};

/// Output of one model (or ensemble) over a panel.
struct ForecastFrame {
    std::string model;
    QuantileLevels levels = QuantileLevels::none();
    std::vector<SeriesForecast> series;
    /// Non-fatal notes such as a fallback to the naive model.
    std::vector<std::string> warnings;

    const SeriesForecast* find(std::string_view id) const;
};

/// Throws Error(alignment) when the frame violates its shape invariants.
void check_frame_shape(const ForecastFrame& frame);

}  // namespace tsagent
