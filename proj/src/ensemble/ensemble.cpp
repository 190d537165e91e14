#include "tsagent/ensemble/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "tsagent/core/error.hpp"

namespace tsagent::ensemble {

double median(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCategory::invalid_argument, "median of an empty set");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return lower + (upper - lower) / 2.0;
}

std::vector<double> pava_isotonic(std::span<const double> values, std::span<const double> weights) {
    if (values.empty() || values.size() != weights.size()) {
        throw Error(ErrorCategory::invalid_argument, "pava: values and weights must have equal, nonzero length");
    }
    for (double w : weights) {
        if (!(w > 0.0)) throw Error(ErrorCategory::invalid_argument, "pava: weights must be positive");
    }
    struct Block {
        double mean;
        double weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        blocks.push_back({values[i], weights[i], 1});
        while (blocks.size() > 1 && blocks[blocks.size() - 2].mean > blocks.back().mean) {
            const Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            const double w = prev.weight + top.weight;
            prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / w;
            prev.weight = w;
            prev.count += top.count;
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (const Block& b : blocks) out.insert(out.end(), b.count, b.mean);
    return out;
}

void monotonize_rows(SeriesForecast& forecast, std::size_t n_levels) {
    if (!forecast.has_quantiles() || n_levels == 0) return;
    const std::vector<double> unit(n_levels, 1.0);
    for (std::size_t k = 0; k < forecast.horizon(); ++k) {
        auto row = forecast.quantile_row(k, n_levels);
        if (std::is_sorted(row.begin(), row.end())) continue;
        const std::vector<double> fixed = pava_isotonic(row, unit);
        std::copy(fixed.begin(), fixed.end(), row.begin());
    }
}

ForecastFrame monotonize_quantiles(ForecastFrame frame) {
    for (SeriesForecast& s : frame.series) monotonize_rows(s, frame.levels.size());
    return frame;
}

std::string ensemble_name(std::span<const std::string> members) {
    std::string name = "median_ensemble[";
    for (std::size_t i = 0; i < members.size(); ++i) name += (i ? "," : "") + members[i];
    return name + "]";
}

models::ModelOutput median_combine(const std::vector<models::ModelOutput>& outputs,
                                   const std::vector<bool>& has_quantiles, int h, const QuantileLevels& levels) {
    const auto hh = static_cast<std::size_t>(h);
    const std::size_t nl = levels.size();
    models::ModelOutput out;
    out.mean.resize(hh);
    std::vector<double> cell;
    for (std::size_t k = 0; k < hh; ++k) {
        cell.clear();
        for (const auto& o : outputs) cell.push_back(o.mean[k]);
        out.mean[k] = median(cell);
    }
    const bool any_quantiles = std::find(has_quantiles.begin(), has_quantiles.end(), true) != has_quantiles.end();
    if (nl > 0 && any_quantiles) {
        out.quantiles.resize(hh * nl);
        for (std::size_t idx = 0; idx < hh * nl; ++idx) {
            cell.clear();
            for (std::size_t i = 0; i < outputs.size(); ++i) {
                if (has_quantiles[i]) cell.push_back(outputs[i].quantiles[idx]);
            }
            out.quantiles[idx] = median(cell);
        }
        SeriesForecast tmp;
        tmp.mean = out.mean;
        tmp.quantiles = std::move(out.quantiles);
        monotonize_rows(tmp, nl);
        out.quantiles = std::move(tmp.quantiles);
    }
    for (const auto& o : outputs) out.warnings.insert(out.warnings.end(), o.warnings.begin(), o.warnings.end());
    return out;
}

ForecastFrame median_ensemble(const std::vector<ForecastFrame>& frames, const QuantileLevels& levels) {
    if (frames.empty()) throw Error(ErrorCategory::invalid_argument, "median_ensemble needs at least one member");
    const ForecastFrame& ref = frames.front();
    std::vector<std::string> names;
    std::vector<bool> with_quantiles;
    for (const ForecastFrame& f : frames) {
        check_frame_shape(f);
        names.push_back(f.model);
        const bool q = !f.levels.empty() && std::all_of(f.series.begin(), f.series.end(),
                                                        [](const SeriesForecast& s) { return s.has_quantiles(); });
        if (q && !(f.levels == levels)) {
            throw Error(ErrorCategory::alignment, "member '" + f.model + "' has quantile levels that differ from the request");
        }
        with_quantiles.push_back(q && !levels.empty());
        if (f.series.size() != ref.series.size()) {
            throw Error(ErrorCategory::alignment, "member '" + f.model + "' covers " + std::to_string(f.series.size()) +
                                                      " series, '" + ref.model + "' covers " +
                                                      std::to_string(ref.series.size()));
        }
    }
    if (!levels.empty() && std::find(with_quantiles.begin(), with_quantiles.end(), true) == with_quantiles.end()) {
        throw Error(ErrorCategory::alignment, "quantiles requested but no ensemble member provides them");
    }

    ForecastFrame out;
    out.model = ensemble_name(names);
    out.levels = levels;
    for (const SeriesForecast& base : ref.series) {
        std::vector<models::ModelOutput> outputs;
        for (const ForecastFrame& f : frames) {
            const SeriesForecast* s = f.find(base.id);
            if (!s) throw Error(ErrorCategory::alignment, "member '" + f.model + "' lacks series '" + base.id + "'");
            if (s->ds != base.ds) {
                throw Error(ErrorCategory::alignment, "member '" + f.model + "' series '" + base.id +
                                                          "' has different forecast timestamps");
            }
            outputs.push_back({s->mean, s->quantiles, {}});
        }
        models::ModelOutput combined =
            median_combine(outputs, with_quantiles, static_cast<int>(base.horizon()), levels);
        out.series.push_back({base.id, base.ds, std::move(combined.mean), std::move(combined.quantiles)});
    }
    for (const ForecastFrame& f : frames) out.warnings.insert(out.warnings.end(), f.warnings.begin(), f.warnings.end());
    return out;
}

MedianEnsemble::MedianEnsemble(std::vector<models::ForecasterPtr> members) : members_(std::move(members)) {
    if (members_.empty()) throw Error(ErrorCategory::invalid_argument, "median_ensemble needs at least one member");
}

std::string MedianEnsemble::name() const {
    std::vector<std::string> names;
    for (const auto& m : members_) names.push_back(m->name());
    return ensemble_name(names);
}

bool MedianEnsemble::supports_quantiles() const {
    return std::any_of(members_.begin(), members_.end(), [](const auto& m) { return m->supports_quantiles(); });
}

models::ModelOutput MedianEnsemble::forecast(const SeriesView& series, int h, const QuantileLevels& levels) const {
    std::vector<models::ModelOutput> outputs;
    std::vector<bool> with_quantiles;
    for (const auto& member : members_) {
        models::ModelOutput o = member->forecast(series, h, levels);
        models::check_output_shape(o, h, levels, member->name());
        with_quantiles.push_back(member->supports_quantiles() && !levels.empty() && !o.quantiles.empty());
        outputs.push_back(std::move(o));
    }
    return median_combine(outputs, with_quantiles, h, levels);
}

}  // namespace tsagent::ensemble
