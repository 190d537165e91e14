#include "tsagent/evaluation/leaderboard.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include "tsagent/core/csv.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/ensemble/ensemble.hpp"
#include "tsagent/evaluation/metrics.hpp"

namespace tsagent::evaluation {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_or_nan(const std::vector<double>& v) {
    if (v.empty()) return kNaN;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct SeriesAccumulator {
    std::vector<double> fold_mase;
    std::vector<double> fold_crps;
    double abs_actual_sum = 0.0;
    std::size_t actual_count = 0;
    bool all_quantiles = true;
};

struct ModelAccumulator {
    std::map<std::string, SeriesAccumulator> series;
    std::vector<std::string> series_order;
    std::vector<double> pinball_sum;
    std::size_t pinball_rows = 0;
    std::size_t covered = 0;
    std::size_t coverage_rows = 0;
    ModelScore score;
};

}  // namespace

const ModelScore* EvalReport::find(std::string_view model) const {
    auto it = std::find_if(scores.begin(), scores.end(), [&](const ModelScore& s) { return s.model == model; });
    return it == scores.end() ? nullptr : &*it;
}

double EvalReport::ranking_value(const ModelScore& score) const {
    return ranking_metric == "crps" ? score.crps : score.mase;
}

EvalReport aggregate_leaderboard(const CrossValReport& cv, const SeriesPanel& panel) {
    if (cv.rows.empty()) throw Error(ErrorCategory::invalid_argument, "aggregate_leaderboard: empty report");
    const auto h = static_cast<std::size_t>(cv.h);
    const std::size_t nl = cv.levels.size();
    const int m = panel.frequency().season_length;

    std::map<std::string, ModelAccumulator> acc;
    for (const std::string& name : cv.models) {
        acc[name].score.model = name;
        acc[name].pinball_sum.assign(nl, 0.0);
    }

    std::vector<double> actuals(h), means(h), quantiles;
    for (std::size_t start = 0; start < cv.rows.size(); start += h) {
        const CvRow& head = cv.rows[start];
        ModelAccumulator& model = acc[head.model];
        if (model.score.model.empty()) {
            model.score.model = head.model;
            model.pinball_sum.assign(nl, 0.0);
        }
        if (head.failed) {
            ++model.score.failures;
            continue;
        }
        ++model.score.folds;
        auto [it, inserted] = model.series.try_emplace(head.id);
        if (inserted) model.series_order.push_back(head.id);
        SeriesAccumulator& s = it->second;

        quantiles.clear();
        bool fold_quantiles = nl > 0;
        for (std::size_t k = 0; k < h; ++k) {
            const CvRow& r = cv.rows[start + k];
            actuals[k] = r.actual;
            means[k] = r.mean;
            if (r.quantiles.size() != nl) fold_quantiles = false;
            quantiles.insert(quantiles.end(), r.quantiles.begin(), r.quantiles.end());
            s.abs_actual_sum += std::abs(r.actual);
            ++s.actual_count;
        }

        const Series* series = panel.find(head.id);
        if (!series) throw Error(ErrorCategory::alignment, "cross-validation row for unknown series '" + head.id + "'");
        const std::span<const double> train(series->y.data(), head.cutoff);
        if (auto v = mase(actuals, means, train, m)) {
            s.fold_mase.push_back(*v);
        } else {
            ++model.score.undefined_mase;
        }

        if (!fold_quantiles) {
            s.all_quantiles = false;
            continue;
        }
        SeriesForecast tmp;
        tmp.mean = means;
        tmp.quantiles = quantiles;
        ensemble::monotonize_rows(tmp, nl);
        s.fold_crps.push_back(crps_approx(actuals, tmp.quantiles, cv.levels));
        for (std::size_t k = 0; k < h; ++k) {
            const auto row = tmp.quantile_row(k, nl);
            for (std::size_t j = 0; j < nl; ++j) model.pinball_sum[j] += pinball(actuals[k], row[j], cv.levels[j]);
            ++model.pinball_rows;
            if (nl >= 2) {
                ++model.coverage_rows;
                if (row.front() <= actuals[k] && actuals[k] <= row.back()) ++model.covered;
            }
        }
    }

    EvalReport report;
    report.levels = cv.levels;
    bool all_probabilistic = nl > 0;
    for (const std::string& name : cv.models) {
        ModelAccumulator& a = acc[name];
        ModelScore& score = a.score;
        std::vector<double> per_series_mase, per_series_crps;
        bool quantiles_everywhere = a.score.folds > 0;
        for (const std::string& id : a.series_order) {
            const SeriesAccumulator& s = a.series.at(id);
            if (!s.fold_mase.empty()) per_series_mase.push_back(mean_or_nan(s.fold_mase));
            if (!s.all_quantiles) quantiles_everywhere = false;
            if (s.fold_crps.empty()) continue;
            const double normalizer = s.abs_actual_sum / static_cast<double>(s.actual_count);
            if (!(normalizer > 0.0)) {
                ++score.excluded_crps;
                continue;
            }
            per_series_crps.push_back(mean_or_nan(s.fold_crps) / normalizer);
        }
        score.mase = mean_or_nan(per_series_mase);
        score.has_quantiles = quantiles_everywhere && a.pinball_rows > 0;
        score.crps = score.has_quantiles ? mean_or_nan(per_series_crps) : kNaN;
        score.pinball.assign(nl, kNaN);
        if (a.pinball_rows > 0) {
            for (std::size_t j = 0; j < nl; ++j) score.pinball[j] = a.pinball_sum[j] / static_cast<double>(a.pinball_rows);
        }
        score.coverage = a.coverage_rows > 0 ? static_cast<double>(a.covered) / static_cast<double>(a.coverage_rows) : kNaN;
        if (!score.has_quantiles || std::isnan(score.crps)) all_probabilistic = false;
        report.scores.push_back(score);
    }

    report.ranking_metric = all_probabilistic ? "crps" : "mase";
    std::stable_sort(report.scores.begin(), report.scores.end(), [&](const ModelScore& a, const ModelScore& b) {
        const double va = report.ranking_value(a);
        const double vb = report.ranking_value(b);
        if (std::isnan(va)) return false;
        if (std::isnan(vb)) return true;
        return va < vb;
    });
    for (std::size_t i = 0; i < report.scores.size(); ++i) report.scores[i].rank = static_cast<int>(i + 1);
    return report;
}

void write_eval_csv(std::ostream& out, const EvalReport& report) {
    std::vector<std::string> header{"rank", "model", "mase", "crps"};
    for (double q : report.levels.values()) header.push_back("pinball_" + quantile_column_name(q));
    for (const char* c : {"coverage", "folds", "failures", "undefined_mase", "excluded_crps", "ranking_metric"}) {
        header.emplace_back(c);
    }
    write_csv_row(out, header);
    for (const ModelScore& s : report.scores) {
        std::vector<std::string> row{std::to_string(s.rank), s.model, format_number(s.mase), format_number(s.crps)};
        for (double p : s.pinball) row.push_back(format_number(p));
        row.push_back(format_number(s.coverage));
        row.push_back(std::to_string(s.folds));
        row.push_back(std::to_string(s.failures));
        row.push_back(std::to_string(s.undefined_mase));
        row.push_back(std::to_string(s.excluded_crps));
        row.push_back(report.ranking_metric);
        write_csv_row(out, row);
    }
}

}  // namespace tsagent::evaluation
