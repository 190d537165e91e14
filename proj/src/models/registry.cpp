#include "tsagent/models/registry.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include "tsagent/core/error.hpp"
#include "tsagent/models/arima.hpp"
#include "tsagent/models/baselines.hpp"
#include "tsagent/models/ets.hpp"

namespace tsagent::models {

namespace {

constexpr std::array<std::string_view, 9> kAliases = {
    "naive", "seasonalnaive", "historicaverage", "ses", "theta", "autoets", "autoarima", "croston", "adida",
};

using Fn = std::function<ModelOutput(const SeriesView&, int, const QuantileLevels&)>;

class BuiltinForecaster final : public Forecaster {
public:
    BuiltinForecaster(std::string name, bool quantiles, bool fallback_to_naive, Fn fn)
        : name_(std::move(name)), quantiles_(quantiles), fallback_(fallback_to_naive), fn_(std::move(fn)) {}

    std::string name() const override { return name_; }
    bool supports_quantiles() const override { return quantiles_; }

    ModelOutput forecast(const SeriesView& series, int h, const QuantileLevels& levels) const override {
        if (!fallback_) return fn_(series, h, levels);
        try {
            return fn_(series, h, levels);
        } catch (const Error& e) {
            ModelOutput out = naive(series.y, h, levels);
            out.warnings.push_back(name_ + " failed (" + e.what() + "); fell back to naive");
            return out;
        }
    }

private:
    std::string name_;
    bool quantiles_;
    bool fallback_;
    Fn fn_;
};

}  // namespace

std::span<const std::string_view> builtin_aliases() { return kAliases; }

bool is_builtin(std::string_view alias) {
    return std::find(kAliases.begin(), kAliases.end(), alias) != kAliases.end();
}

ForecasterPtr make_builtin(std::string_view alias) {
    if (alias == "naive") {
        return std::make_shared<BuiltinForecaster>(
            "naive", true, false, [](const SeriesView& s, int h, const QuantileLevels& l) { return naive(s.y, h, l); });
    }
    if (alias == "seasonalnaive") {
        return std::make_shared<BuiltinForecaster>("seasonalnaive", true, false,
                                                   [](const SeriesView& s, int h, const QuantileLevels& l) {
                                                       return seasonal_naive(s.y, s.freq.season_length, h, l);
                                                   });
    }
    if (alias == "historicaverage") {
        return std::make_shared<BuiltinForecaster>(
            "historicaverage", true, false,
            [](const SeriesView& s, int h, const QuantileLevels& l) { return historic_average(s.y, h, l); });
    }
    if (alias == "ses") {
        return std::make_shared<BuiltinForecaster>(
            "ses", true, false, [](const SeriesView& s, int h, const QuantileLevels& l) { return ses_forecast(s.y, h, l); });
    }
    if (alias == "theta") {
        return std::make_shared<BuiltinForecaster>("theta", true, false,
                                                   [](const SeriesView& s, int h, const QuantileLevels& l) {
                                                       return theta(s.y, s.freq.season_length, h, l);
                                                   });
    }
    if (alias == "autoets") {
        return std::make_shared<BuiltinForecaster>("autoets", true, true,
                                                   [](const SeriesView& s, int h, const QuantileLevels& l) {
                                                       return auto_ets(s.y, s.freq.season_length, h, l).output;
                                                   });
    }
    if (alias == "autoarima") {
        return std::make_shared<BuiltinForecaster>("autoarima", true, true,
                                                   [](const SeriesView& s, int h, const QuantileLevels& l) {
                                                       return auto_arima(s.y, s.freq.season_length, h, l).output;
                                                   });
    }
    if (alias == "croston") {
        return std::make_shared<BuiltinForecaster>("croston", false, false,
                                                   [](const SeriesView& s, int h, const QuantileLevels&) {
                                                       return croston(s.y, h, CrostonVariant::classic);
                                                   });
    }
    if (alias == "adida") {
        return std::make_shared<BuiltinForecaster>("adida", false, false,
                                                   [](const SeriesView& s, int h, const QuantileLevels&) {
                                                       return croston(s.y, h, CrostonVariant::adida);
                                                   });
    }
    std::string known;
    for (auto a : kAliases) known += (known.empty() ? "" : ", ") + std::string(a);
    throw Error(ErrorCategory::invalid_argument, "unknown model alias '" + std::string(alias) + "' (known: " + known + ")");
}

std::string_view assumption_note(std::string_view alias) {
    if (alias == "naive") return "random walk: the next value equals the last observation";
    if (alias == "seasonalnaive") return "stable seasonal pattern: each value repeats the same season last cycle";
    if (alias == "historicaverage") return "stationary level: the future fluctuates around the historical mean";
    if (alias == "ses") return "slowly drifting level without trend or seasonality";
    if (alias == "theta") return "linear long-run trend plus a smoothed short-run level";
    if (alias == "autoets") return "additive level/trend/season states updated by exponential smoothing";
    if (alias == "autoarima") return "linear autocorrelation after differencing to stationarity";
    if (alias == "croston") return "intermittent demand: sizes and inter-demand intervals smoothed separately";
    if (alias == "adida") return "intermittent demand: aggregation removes zeros before smoothing";
    return "externally served or combined model";
}

}  // namespace tsagent::models
