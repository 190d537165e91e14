#include "tsagent/evaluation/crossval.hpp"

#include <cmath>
#include <ostream>

#include "tsagent/core/csv.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/core/parallel.hpp"

namespace tsagent::evaluation {

CutoffPlan rolling_cutoffs(std::size_t n, int h, int n_windows, int step) {
    if (h < 1 || n_windows < 1 || step < 1) {
        throw Error(ErrorCategory::invalid_argument, "rolling_cutoffs: h, n_windows and step must be >= 1");
    }
    const auto ni = static_cast<long long>(n);
    const long long first = ni - h - static_cast<long long>(n_windows - 1) * step;
    if (first < 1) {
        const long long max_windows = ni - h >= 1 ? (ni - h - 1) / step + 1 : 0;
        throw Error(ErrorCategory::series_too_short,
                    "series of length " + std::to_string(n) + " cannot hold " + std::to_string(n_windows) +
                        " windows of h=" + std::to_string(h) + " with step " + std::to_string(step) +
                        " (at most " + std::to_string(max_windows) + " windows fit)");
    }
    CutoffPlan plan{h, n_windows, step, {}};
    for (int i = 0; i < n_windows; ++i) {
        plan.cutoffs.push_back(static_cast<std::size_t>(ni - h - static_cast<long long>(n_windows - 1 - i) * step));
    }
    return plan;
}

CrossValReport cross_validate(const SeriesPanel& panel, const std::vector<models::ForecasterPtr>& models,
                              const CvOptions& options) {
    if (models.empty()) throw Error(ErrorCategory::invalid_argument, "cross_validate: empty model list");
    const int h = options.h;
    const int step = options.step > 0 ? options.step : h;

    std::vector<CutoffPlan> plans;
    for (const Series& s : panel.series()) {
        try {
            plans.push_back(rolling_cutoffs(s.size(), h, options.n_windows, step));
        } catch (const Error& e) {
            throw Error(e.category(), "series '" + s.id + "': " + e.what());
        }
    }

    struct Task {
        std::size_t series;
        std::size_t cutoff;
        std::size_t model;
    };
    std::vector<Task> tasks;
    for (std::size_t s = 0; s < panel.size(); ++s) {
        for (std::size_t c : plans[s].cutoffs) {
            for (std::size_t m = 0; m < models.size(); ++m) tasks.push_back({s, c, m});
        }
    }

    CrossValReport report;
    report.h = h;
    report.levels = options.levels;
    for (const auto& m : models) report.models.push_back(m->name());

    std::vector<std::vector<CvRow>> blocks(tasks.size());
    parallel_for(tasks.size(), options.jobs, [&](std::size_t t) {
        const Task& task = tasks[t];
        const Series& series = panel[task.series];
        const models::Forecaster& model = *models[task.model];
        const SeriesView train = panel.view(task.series).head(task.cutoff);

        models::ModelOutput out;
        std::string failure;
        try {
            out = model.forecast(train, h, options.levels);
            models::check_output_shape(out, h, options.levels, model.name());
        } catch (const std::exception& e) {
            failure = e.what();
        }

        auto& rows = blocks[t];
        const std::size_t nl = options.levels.size();
        for (int k = 0; k < h; ++k) {
            CvRow row;
            row.id = series.id;
            row.cutoff = task.cutoff;
            row.cutoff_ds = series.ds[task.cutoff - 1];
            row.model = report.models[task.model];
            row.step = k + 1;
            row.ds = series.ds[task.cutoff + static_cast<std::size_t>(k)];
            row.actual = series.y[task.cutoff + static_cast<std::size_t>(k)];
            if (failure.empty()) {
                row.mean = out.mean[static_cast<std::size_t>(k)];
                if (model.supports_quantiles() && !out.quantiles.empty()) {
                    const auto first = out.quantiles.begin() + static_cast<std::ptrdiff_t>(k * nl);
                    row.quantiles.assign(first, first + static_cast<std::ptrdiff_t>(nl));
                }
            } else {
                row.mean = std::numeric_limits<double>::quiet_NaN();
                row.failed = true;
                row.error = failure;
            }
            rows.push_back(std::move(row));
        }
    });
    for (auto& block : blocks) {
        for (auto& row : block) report.rows.push_back(std::move(row));
    }
    return report;
}

void write_cv_csv(std::ostream& out, const CrossValReport& report) {
    std::vector<std::string> header{"unique_id", "cutoff", "model", "step", "ds", "y", "mean"};
    for (double q : report.levels.values()) header.push_back(quantile_column_name(q));
    header.push_back("failed");
    header.push_back("error");
    write_csv_row(out, header);
    std::vector<std::string> row;
    for (const CvRow& r : report.rows) {
        row = {r.id, format_timestamp(r.cutoff_ds), r.model, std::to_string(r.step), format_timestamp(r.ds),
               format_number(r.actual), format_number(r.mean)};
        for (std::size_t j = 0; j < report.levels.size(); ++j) {
            row.push_back(r.quantiles.empty() ? "" : format_number(r.quantiles[j]));
        }
        row.push_back(r.failed ? "1" : "0");
        row.push_back(r.error);
        write_csv_row(out, row);
    }
}

}  // namespace tsagent::evaluation
