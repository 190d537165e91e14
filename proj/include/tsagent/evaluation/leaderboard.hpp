#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tsagent/core/panel.hpp"
#include "tsagent/evaluation/crossval.hpp"

namespace tsagent::evaluation {

/// Aggregated scores for one model. NaN marks a metric with no usable folds.
struct ModelScore {
    std::string model;
    int rank = 0;
    double mase = 0.0;  ///< mean over series of the per-series mean fold MASE
    double crps = 0.0;  ///< mean over series of fold-mean CRPS / mean |y| of the series' windows
    std::vector<double> pinball;  ///< mean pinball loss per quantile level
    double coverage = 0.0;        ///< share of actuals inside [lowest, highest] level
    bool has_quantiles = false;
    std::size_t folds = 0;           ///< successful (series, cutoff) folds
    std::size_t failures = 0;        ///< failed folds
    std::size_t undefined_mase = 0;  ///< folds with a zero MASE scale
    std::size_t excluded_crps = 0;   ///< series with a zero CRPS normalizer
};

struct EvalReport {
    std::string ranking_metric;  ///< "crps" or "mase"
    QuantileLevels levels = QuantileLevels::none();
    std::vector<ModelScore> scores;  ///< best first

    const ModelScore* find(std::string_view model) const;
    double ranking_value(const ModelScore& score) const;
};

/// Ranks by CRPS when every model produced quantiles, by MASE otherwise.
/// Quantile rows are monotonized before scoring. Ties keep the report's model order.
EvalReport aggregate_leaderboard(const CrossValReport& cv, const SeriesPanel& panel);

/// rank,model,mase,crps,pinball_q...,coverage,folds,failures,undefined_mase,excluded_crps
void write_eval_csv(std::ostream& out, const EvalReport& report);

}  // namespace tsagent::evaluation
