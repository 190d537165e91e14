#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsagent/models/forecaster.hpp"

namespace tsagent::models {

enum class EtsTrend { none, additive, damped };
enum class EtsSeason { none, additive };

/// "ANN", "AAdA", ... (error, trend, season).
std::string ets_label(EtsTrend trend, EtsSeason season);

/// Additive-error exponential smoothing model with fitted parameters.
struct EtsParams {
    EtsTrend trend = EtsTrend::none;
    EtsSeason season = EtsSeason::none;
    int season_length = 1;
    double alpha = 0.0;
    double beta = 0.0;   ///< 0 without trend; beta <= alpha
    double gamma = 0.0;  ///< 0 without season; gamma <= 1 - alpha
    double phi = 1.0;    ///< damping in [0.8, 0.98]; 1 when undamped
    double level0 = 0.0;
    double trend0 = 0.0;
    std::vector<double> season0;  ///< phase 0..m-1 indices, sum zero
    double sse = 0.0;
    double sigma = 0.0;  ///< sqrt(SSE / n)
    double aicc = 0.0;
    int n_parameters = 0;  ///< smoothing parameters plus initial states
};

struct EtsCandidate {
    EtsTrend trend = EtsTrend::none;
    EtsSeason season = EtsSeason::none;
    bool fitted = false;
    double aicc = 0.0;
    std::string note;
};

struct EtsFit {
    EtsParams params;
    std::vector<EtsCandidate> candidates;
    ModelOutput output;
};

/// One-step SSE of the model on y given its smoothing parameters and initial states.
double ets_sse(std::span<const double> y, const EtsParams& params);

/// Heuristic initial states plus grid-refined smoothing parameters for one model form.
/// Throws if the form's preconditions fail (length >= 10, and length >= 2m when seasonal).
EtsParams fit_ets(std::span<const double> y, int m, EtsTrend trend, EtsSeason season);

/// Point forecasts from the fitted states (no noise).
std::vector<double> ets_point_forecast(std::span<const double> y, const EtsParams& params, int h);

inline constexpr int kEtsSimulationPaths = 1000;
inline constexpr std::uint64_t kEtsDefaultSeed = 0x5eed'e75ULL;

/// Fits every admissible (trend x season) form, keeps the lowest AICc and
/// forecasts h steps. Quantiles come from simulated Gaussian sample paths.
EtsFit auto_ets(std::span<const double> y, int m, int h, const QuantileLevels& levels,
                std::uint64_t seed = kEtsDefaultSeed);

}  // namespace tsagent::models
