#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tsagent/core/panel.hpp"
#include "tsagent/models/forecaster.hpp"

namespace tsagent::evaluation {

/// Training lengths for each fold: cutoff_i = n - h - (n_windows - 1 - i) * step.
struct CutoffPlan {
    int h = 1;
    int n_windows = 1;
    int step = 1;
    std::vector<std::size_t> cutoffs;
};

CutoffPlan rolling_cutoffs(std::size_t n, int h, int n_windows, int step);

/// One forecast step of one fold. Failed folds keep their h rows with NaN forecasts.
struct CvRow {
    std::string id;
    std::size_t cutoff = 0;  ///< training length
    Timestamp cutoff_ds{};   ///< timestamp of the last training observation
    std::string model;
    int step = 0;  ///< 1-based
    Timestamp ds{};
    double actual = 0.0;
    double mean = 0.0;
    std::vector<double> quantiles;
    bool failed = false;
    std::string error;
};

struct CrossValReport {
    int h = 1;
    QuantileLevels levels = QuantileLevels::none();
    std::vector<std::string> models;
    std::vector<CvRow> rows;  ///< ordered by series, cutoff, model, step
};

struct CvOptions {
    int h = 1;
    int n_windows = 1;
    int step = 0;  ///< 0 means step = h
    QuantileLevels levels;
    std::size_t jobs = 0;
};

/// Rolling-origin evaluation: every (series, cutoff, model) fits on the first `cutoff`
/// observations only. Model exceptions become failure rows instead of aborting.
CrossValReport cross_validate(const SeriesPanel& panel, const std::vector<models::ForecasterPtr>& models,
                              const CvOptions& options);

/// unique_id,cutoff,model,step,ds,y,mean,q...,failed,error
void write_cv_csv(std::ostream& out, const CrossValReport& report);

}  // namespace tsagent::evaluation
