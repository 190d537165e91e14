#include "tsagent/agent/agent.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <regex>
#include <sstream>

#include "tsagent/core/csv.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/ensemble/ensemble.hpp"
#include "tsagent/evaluation/crossval.hpp"
#include "tsagent/models/registry.hpp"

namespace tsagent::agent {

using nlohmann::json;

namespace {

constexpr double kSeasonalThreshold = 0.6;
constexpr double kIntermittentThreshold = 0.3;
constexpr double kTrendThreshold = 0.6;
constexpr std::size_t kArimaMinLength = 20;

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string_view period_noun(Frequency freq, bool plural) {
    switch (freq.unit) {
        case FrequencyUnit::yearly: return plural ? "years" : "year";
        case FrequencyUnit::quarterly: return plural ? "quarters" : "quarter";
        case FrequencyUnit::monthly: return plural ? "months" : "month";
        case FrequencyUnit::weekly: return plural ? "weeks" : "week";
        case FrequencyUnit::daily: return plural ? "days" : "day";
        case FrequencyUnit::hourly: return plural ? "hours" : "hour";
    }
    return plural ? "periods" : "period";
}

void add_unique(std::vector<std::string>& list, std::string_view alias) {
    if (std::find(list.begin(), list.end(), alias) == list.end()) list.emplace_back(alias);
}

std::vector<Candidate> with_notes(const std::vector<std::string>& aliases, std::size_t budget) {
    std::vector<Candidate> out;
    for (const auto& a : aliases) {
        if (out.size() >= budget) break;
        out.push_back({a, std::string(models::assumption_note(a))});
    }
    return out;
}

std::string join(const std::vector<std::string>& items, std::string_view sep = ", ") {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += sep;
        out += s;
    }
    return out;
}

std::string candidate_names(const std::vector<Candidate>& candidates) {
    std::vector<std::string> names;
    for (const auto& c : candidates) names.push_back(c.alias);
    return join(names);
}

std::vector<std::string> deterministic_aliases(const features::FeatureReport& features) {
    std::vector<std::string> merged;
    for (const auto& row : features.rows) {
        for (const auto& a : rule_table(row)) add_unique(merged, a);
    }
    if (merged.empty()) merged.emplace_back("naive");
    return merged;
}

/// Per-step totals across series; empty when the frame has no series.
struct Aggregate {
    std::vector<Timestamp> ds;
    std::vector<double> mean;
    std::vector<double> lower, upper;  ///< outermost quantile levels, summed; empty without quantiles
    double lower_level = 0, upper_level = 0;
    std::size_t n_series = 0;
};

Aggregate aggregate(const ForecastFrame& frame) {
    Aggregate agg;
    if (frame.series.empty()) return agg;
    const std::size_t h = frame.series.front().horizon();
    agg.ds = frame.series.front().ds;
    agg.mean.assign(h, 0.0);
    agg.n_series = frame.series.size();
    const std::size_t L = frame.levels.size();
    bool quantiles = L >= 2;
    for (const auto& s : frame.series) quantiles = quantiles && s.has_quantiles();
    if (quantiles) {
        agg.lower.assign(h, 0.0);
        agg.upper.assign(h, 0.0);
        agg.lower_level = frame.levels[0];
        agg.upper_level = frame.levels[L - 1];
    }
    for (const auto& s : frame.series) {
        for (std::size_t k = 0; k < h && k < s.horizon(); ++k) {
            agg.mean[k] += s.mean[k];
            if (quantiles) {
                agg.lower[k] += s.quantile_row(k, L).front();
                agg.upper[k] += s.quantile_row(k, L).back();
            }
        }
    }
    return agg;
}

std::string scope_text(const Aggregate& agg) {
    return agg.n_series > 1 ? " summed over " + std::to_string(agg.n_series) + " series" : "";
}

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", fraction * 100.0);
    return buf;
}

std::optional<int> query_count(const std::string& q) {
    static const std::regex next_n(R"(next\s+(\d+))");
    std::smatch m;
    if (std::regex_search(q, m, next_n)) {
        try {
            return std::stoi(m[1].str());
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    return std::nullopt;
}

std::string summary_text(const Aggregate& agg, const std::string& model, Frequency freq) {
    const std::size_t h = agg.mean.size();
    double total = 0;
    for (double v : agg.mean) total += v;
    const auto [mn, mx] = std::minmax_element(agg.mean.begin(), agg.mean.end());
    const auto imin = static_cast<std::size_t>(mn - agg.mean.begin());
    const auto imax = static_cast<std::size_t>(mx - agg.mean.begin());
    std::string out = "Forecast from " + model + " for the next " + std::to_string(h) + " " +
                      std::string(period_noun(freq, h != 1)) + scope_text(agg) + ": total " + format_grouped(total) +
                      ", min " + format_grouped(*mn) + " (" + format_timestamp(agg.ds[imin]) + "), max " +
                      format_grouped(*mx) + " (" + format_timestamp(agg.ds[imax]) + ")";
    if (!agg.lower.empty()) {
        std::size_t widest = 0;
        for (std::size_t k = 1; k < h; ++k) {
            if (agg.upper[k] - agg.lower[k] > agg.upper[widest] - agg.lower[widest]) widest = k;
        }
        out += "; widest " + percent(agg.upper_level - agg.lower_level) + "% interval at step " +
               std::to_string(widest + 1) + " (" + format_timestamp(agg.ds[widest]) + "), from " +
               format_grouped(agg.lower[widest]) + " to " + format_grouped(agg.upper[widest]);
    }
    return out + ".";
}

std::string deterministic_answer(const std::optional<std::string>& query, const ForecastFrame& frame, Frequency freq) {
    const Aggregate agg = aggregate(frame);
    if (agg.mean.empty()) return "No forecast is available.";
    if (!query || query->find_first_not_of(" \t\r\n") == std::string::npos) {
        return summary_text(agg, frame.model, freq);
    }
    const std::string q = lower(*query);
    const int h = static_cast<int>(agg.mean.size());
    const std::optional<int> requested = query_count(q);
    int n = h;
    std::string caveat;
    if (requested) {
        if (*requested < 1) {
            caveat = " (requested horizon was not positive; using all " + std::to_string(h) + ")";
        } else if (*requested > h) {
            caveat = " (only " + std::to_string(h) + " " + std::string(period_noun(freq, h != 1)) + " were forecast)";
        } else {
            n = *requested;
        }
    }
    const std::string window = "the next " + std::to_string(n) + " " + std::string(period_noun(freq, n != 1)) + " (" +
                               format_timestamp(agg.ds.front()) + " to " +
                               format_timestamp(agg.ds[static_cast<std::size_t>(n - 1)]) + ")";
    auto has = [&](std::initializer_list<const char*> words) {
        return std::any_of(words.begin(), words.end(), [&](const char* w) { return q.find(w) != std::string::npos; });
    };
    double total = 0;
    for (int k = 0; k < n; ++k) total += agg.mean[static_cast<std::size_t>(k)];

    if (has({"how many", "how much", "total", "sum"})) {
        return "Approximately " + format_grouped(total) + " in total over " + window + scope_text(agg) +
               ", summing the point forecasts of " + frame.model + caveat + ".";
    }
    if (has({"average", "mean"})) {
        return "The average point forecast over " + window + scope_text(agg) + " is about " +
               format_grouped(total / n) + " (" + frame.model + ")" + caveat + ".";
    }
    if (has({"peak", "max", "highest", "largest"})) {
        const auto it = std::max_element(agg.mean.begin(), agg.mean.begin() + n);
        const auto idx = static_cast<std::size_t>(it - agg.mean.begin());
        return "The peak over " + window + scope_text(agg) + " is about " + format_grouped(*it) + " at " +
               format_timestamp(agg.ds[idx]) + " (" + frame.model + ")" + caveat + ".";
    }
    return summary_text(agg, frame.model, freq);
}

std::string forecast_table(const ForecastFrame& frame) {
    std::ostringstream out;
    write_forecast_csv(out, {frame});
    return out.str();
}

std::optional<int> llm_horizon(const std::string& query, int max_h, const LlmSession& llm, std::vector<TraceStep>& trace) {
    ChatExchange ex;
    ex.messages.push_back({Role::system,
                           "You extract the forecast horizon from a user's question about a time series. "
                           "Call set_horizon with the number of future periods requested."});
    ex.messages.push_back({Role::user, query});
    ex.tools.push_back({"set_horizon", "Set the number of future periods to forecast.",
                        json{{"type", "object"},
                             {"properties", {{"h", {{"type", "integer"}, {"minimum", 1}, {"maximum", max_h}}}}},
                             {"required", {"h"}}}});
    try {
        const AssistantMessage reply = llm_chat(llm.config, ex, *llm.transport);
        if (reply.tool_call && reply.tool_call->arguments.contains("h") && reply.tool_call->arguments["h"].is_number_integer()) {
            const long long h = reply.tool_call->arguments["h"].get<long long>();
            if (h >= 1 && h <= max_h) return static_cast<int>(h);
            trace.push_back({"features", "llm horizon " + std::to_string(h) + " outside [1, " + std::to_string(max_h) + "]; using default"});
            return std::nullopt;
        }
        trace.push_back({"features", "llm gave no valid set_horizon call; using default"});
    } catch (const Error& e) {
        trace.push_back({"features", std::string("llm horizon request failed (") + e.what() + "); using default"});
    }
    return std::nullopt;
}

std::string feature_sentence(const features::SeriesFeatures& f) {
    std::string s = f.id + ": n=" + std::to_string(f.n) + ", season length " + std::to_string(f.season_length);
    if (f.trend_strength) s += ", trend strength " + format_stat(*f.trend_strength);
    if (f.seasonal_strength) s += ", seasonal strength " + format_stat(*f.seasonal_strength);
    if (f.kpss_stat) {
        s += ", KPSS statistic " + format_stat(*f.kpss_stat) +
             (f.kpss_level_stationary.value_or(true) ? " (level stationary)" : " (not level stationary)");
    }
    s += ", share of zeros " + format_stat(f.intermittency);
    return s + ".";
}

std::string interval_sentence(const ForecastFrame& frame) {
    const std::size_t L = frame.levels.size();
    if (L < 2) return {};
    double width = 0;
    std::size_t count = 0;
    for (const auto& s : frame.series) {
        if (!s.has_quantiles()) continue;
        for (std::size_t k = 0; k < s.horizon(); ++k) {
            const auto row = s.quantile_row(k, L);
            width += row.back() - row.front();
            ++count;
        }
    }
    if (count == 0) return {};
    return "The central " + percent(frame.levels[L - 1] - frame.levels[0]) + "% interval has mean width " +
           format_stat(width / static_cast<double>(count)) + ".";
}

std::string templated_explanation(const AgentResult& r) {
    std::ostringstream out;
    out << "Feature analysis:";
    constexpr std::size_t kMaxSeriesLines = 10;
    for (std::size_t i = 0; i < r.features.rows.size() && i < kMaxSeriesLines; ++i) {
        out << "\n  " << feature_sentence(r.features.rows[i]);
    }
    if (r.features.rows.size() > kMaxSeriesLines) {
        out << "\n  (" << r.features.rows.size() - kMaxSeriesLines << " more series omitted)";
    }
    out << "\nCandidates: " << candidate_names(r.candidates) << ", compared over " << r.n_windows
        << " rolling window(s) of " << r.h << " steps.";
    out << "\nSelection: " << r.rationale;
    const std::string interval = interval_sentence(r.forecast);
    if (!interval.empty()) out << "\n" << interval;
    return out.str();
}

std::string selection_rationale(const evaluation::EvalReport& lb) {
    const auto& best = lb.scores.front();
    const double v = lb.ranking_value(best);
    std::string s = best.model + " ranks first by " + lb.ranking_metric + " (" + format_stat(v) + ")";
    if (lb.scores.size() > 1) {
        const auto& second = lb.scores[1];
        const double v2 = lb.ranking_value(second);
        if (std::isfinite(v) && std::isfinite(v2)) {
            s += "; runner-up " + second.model + " (" + format_stat(v2) + "), margin " + format_stat(v2 - v);
        } else {
            s += "; runner-up " + second.model + " has no usable score";
        }
    }
    return s + ".";
}

std::string context_block(const AgentResult& r) {
    std::ostringstream out;
    out << "FEATURES\n";
    features::write_feature_csv(out, r.features);
    out << "LEADERBOARD\n";
    evaluation::write_eval_csv(out, r.leaderboard);
    out << "SELECTED " << r.selected << "\nFORECAST\n" << forecast_table(r.forecast);
    return out.str();
}

}  // namespace

AgentMode parse_mode(std::string_view text) {
    if (text == "deterministic") return AgentMode::deterministic;
    if (text == "llm") return AgentMode::llm;
    throw Error(ErrorCategory::invalid_argument, "mode must be 'deterministic' or 'llm', got '" + std::string(text) + "'");
}

std::string_view to_string(AgentMode mode) { return mode == AgentMode::llm ? "llm" : "deterministic"; }

std::string format_grouped(double value) {
    if (!std::isfinite(value)) return "n/a";
    const bool integral = std::abs(value) >= 100.0 || value == std::round(value);
    char buf[64];
    std::snprintf(buf, sizeof buf, integral ? "%.0f" : "%.2f", value);
    std::string s = buf;
    const bool negative = !s.empty() && s[0] == '-';
    const std::size_t start = negative ? 1 : 0;
    std::size_t end = s.find('.');
    if (end == std::string::npos) end = s.size();
    for (std::size_t pos = end; pos > start + 3; pos -= 3) s.insert(pos - 3, ",");
    return s == "-0" ? "0" : s;
}

std::string format_stat(double value) {
    if (!std::isfinite(value)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof buf, std::abs(value) >= 1000.0 ? "%.1f" : "%.4g", value);
    return buf;
}

std::vector<std::string> rule_table(const features::SeriesFeatures& f) {
    std::vector<std::string> out;
    const std::size_t m = static_cast<std::size_t>(f.season_length);
    const bool seasonal =
        m > 1 && f.n >= 2 * m && f.seasonal_strength && *f.seasonal_strength >= kSeasonalThreshold;
    const bool intermittent = f.intermittency >= kIntermittentThreshold;
    const bool trending = (f.kpss_level_stationary && !*f.kpss_level_stationary) ||
                          (f.trend_strength && *f.trend_strength >= kTrendThreshold);
    const bool arima_ok = f.n >= kArimaMinLength && !intermittent;

    if (seasonal) {
        for (auto a : {"seasonalnaive", "autoets", "theta"}) add_unique(out, a);
    } else {
        for (auto a : {"naive", "ses"}) add_unique(out, a);
    }
    if (intermittent) {
        for (auto a : {"croston", "adida"}) add_unique(out, a);
    }
    if (trending) {
        add_unique(out, "autoets");
        if (arima_ok) add_unique(out, "autoarima");
        add_unique(out, "theta");
    }
    add_unique(out, "naive");
    if (arima_ok) add_unique(out, "autoarima");
    return out;
}

std::vector<Candidate> propose_candidates(const features::FeatureReport& features, const AgentConfig& config,
                                          std::span<const std::string_view> registry, const LlmSession* llm,
                                          std::vector<TraceStep>* trace) {
    if (config.budget < 1) throw Error(ErrorCategory::invalid_argument, "candidate budget must be >= 1");
    if (registry.empty()) throw Error(ErrorCategory::invalid_argument, "empty model registry");
    auto note = [&](std::string detail) {
        if (trace) trace->push_back({"candidates", std::move(detail)});
    };
    auto in_registry = [&](std::string_view a) { return std::find(registry.begin(), registry.end(), a) != registry.end(); };

    std::vector<std::string> table;
    for (const auto& a : deterministic_aliases(features)) {
        if (in_registry(a)) table.push_back(a);
    }
    if (table.empty()) table.emplace_back(registry.front());

    if (config.mode == AgentMode::llm && llm != nullptr) {
        json enum_values = json::array();
        for (auto a : registry) enum_values.push_back(std::string(a));
        ChatExchange ex;
        ex.messages.push_back({Role::system,
                               "You choose forecasting models for a time-series panel. Start from simple statistical "
                               "baselines and add more complex models only when the features call for them. Call "
                               "propose_models with at most " + std::to_string(config.budget) +
                                   " aliases from the allowed list, most promising first."});
        std::ostringstream features_csv;
        features::write_feature_csv(features_csv, features);
        ex.messages.push_back({Role::user, "Series features:\n" + features_csv.str()});
        ex.tools.push_back({"propose_models", "Propose candidate forecasting models by registry alias.",
                            json{{"type", "object"},
                                 {"properties", {{"candidates", {{"type", "array"}, {"items", {{"type", "string"}, {"enum", enum_values}}}}}}},
                                 {"required", {"candidates"}}}});
        try {
            const AssistantMessage reply = llm_chat(llm->config, ex, *llm->transport);
            std::vector<std::string> accepted;
            std::vector<std::string> dropped;
            if (reply.tool_call && reply.tool_call->name == "propose_models" &&
                reply.tool_call->arguments.contains("candidates") && reply.tool_call->arguments["candidates"].is_array()) {
                for (const auto& v : reply.tool_call->arguments["candidates"]) {
                    if (v.is_string() && in_registry(v.get<std::string>())) {
                        add_unique(accepted, v.get<std::string>());
                    } else {
                        dropped.push_back(v.is_string() ? v.get<std::string>() : v.dump());
                    }
                }
            }
            if (!dropped.empty()) note("dropped aliases outside the registry: " + join(dropped));
            if (!accepted.empty()) {
                auto out = with_notes(accepted, config.budget);
                note("llm proposal: " + candidate_names(out));
                return out;
            }
            note("llm proposal empty or malformed; using rule table");
        } catch (const Error& e) {
            note(std::string("llm proposal failed (") + e.what() + "); using rule table");
        }
    }
    auto out = with_notes(table, config.budget);
    note("rule table: " + candidate_names(out));
    return out;
}

std::string answer_query(const std::optional<std::string>& query, const ForecastFrame& forecast, Frequency freq,
                         const LlmSession* llm) {
    if (llm != nullptr && query && !forecast.series.empty()) {
        ChatExchange ex;
        ex.messages.push_back({Role::system,
                               "Answer the user's question about the forecast below. Cite only numbers that appear in "
                               "the table or simple sums of them; do not invent values."});
        ex.messages.push_back({Role::user, "Forecast table:\n" + forecast_table(forecast) + "\nQuestion: " + *query});
        try {
            const AssistantMessage reply = llm_chat(llm->config, ex, *llm->transport);
            if (!reply.text.empty()) return reply.text;
        } catch (const Error&) {
            // fall through to the grammar
        }
    }
    return deterministic_answer(query, forecast, freq);
}

AgentResult run_agent(const SeriesPanel& panel, const std::optional<std::string>& query, std::optional<int> h,
                      const AgentConfig& config, const std::optional<LlmSession>& llm_arg) {
    if (panel.empty()) throw Error(ErrorCategory::insufficient_data, "the agent needs at least one series");
    if (config.budget < 1) throw Error(ErrorCategory::invalid_argument, "candidate budget must be >= 1");
    if (config.n_windows < 1) throw Error(ErrorCategory::invalid_argument, "n_windows must be >= 1");

    std::optional<LlmSession> llm;
    if (config.mode == AgentMode::llm) {
        if (!llm_arg) throw Error(ErrorCategory::config, "llm mode requires an LLM configuration");
        llm = *llm_arg;
        if (!llm->transport) llm->transport = adapters::default_transport();
        const char* credential = std::getenv(llm->config.credential_env.c_str());
        if (credential == nullptr || *credential == '\0') {
            throw Error(ErrorCategory::config, "environment variable " + llm->config.credential_env + " is not set");
        }
    }
    const LlmSession* session = llm ? &*llm : nullptr;

    AgentResult r;
    r.mode = config.mode;
    const Frequency freq = panel.frequency();

    // (1) features
    r.features = features::compute_features(panel, config.jobs);
    r.trace.push_back({"features", "computed features for " + std::to_string(panel.size()) + " series (" +
                                       std::string(freq.name()) + ", season length " +
                                       std::to_string(freq.season_length) + ")"});

    const int max_h = 4 * freq.season_length;
    if (h) {
        if (*h < 1) throw Error(ErrorCategory::invalid_argument, "horizon must be >= 1");
        r.h = *h;
    } else {
        r.h = freq.season_length;
        if (session && query) {
            if (auto parsed = llm_horizon(*query, max_h, *session, r.trace)) r.h = *parsed;
        }
    }

    // (2) candidates and cross-validation
    r.candidates = propose_candidates(r.features, config, models::builtin_aliases(), session, &r.trace);

    std::size_t min_len = panel[0].size();
    for (const auto& s : panel.series()) min_len = std::min(min_len, s.size());
    const int step = config.step > 0 ? config.step : r.h;
    int windows = config.n_windows;
    while (windows > 1) {
        try {
            evaluation::rolling_cutoffs(min_len, r.h, windows, step);
            break;
        } catch (const Error&) {
            --windows;
        }
    }
    evaluation::rolling_cutoffs(min_len, r.h, windows, step);  // throws series-too-short when even one fold fails
    r.n_windows = windows;

    std::vector<models::ForecasterPtr> forecasters;
    for (const auto& c : r.candidates) forecasters.push_back(models::make_builtin(c.alias));
    evaluation::CvOptions options;
    options.h = r.h;
    options.n_windows = windows;
    options.step = step;
    options.levels = config.levels;
    options.jobs = config.jobs;
    const evaluation::CrossValReport cv = evaluation::cross_validate(panel, forecasters, options);
    std::size_t failed_rows = 0;
    for (const auto& row : cv.rows) failed_rows += row.failed ? 1 : 0;
    r.trace.push_back({"cv", std::to_string(r.candidates.size()) + " candidates x " + std::to_string(windows) +
                                 " window(s), h=" + std::to_string(r.h) + ", step " + std::to_string(step) + ", " +
                                 std::to_string(cv.rows.size()) + " rows, " + std::to_string(failed_rows) +
                                 " failed"});

    // (3) selection, refit, forecast
    r.leaderboard = evaluation::aggregate_leaderboard(cv, panel);
    r.selected = r.leaderboard.scores.front().model;
    r.rationale = selection_rationale(r.leaderboard);
    r.trace.push_back({"select", r.rationale});

    const models::ForecasterPtr winner = models::make_builtin(r.selected);
    r.forecast = ensemble::monotonize_quantiles(models::forecast_panel(*winner, panel, r.h, config.levels, config.jobs));
    r.trace.push_back({"forecast", "refit " + r.selected + " on full history; " + std::to_string(r.h) +
                                       " steps for " + std::to_string(r.forecast.series.size()) + " series" +
                                       (r.forecast.warnings.empty() ? "" : "; " + join(r.forecast.warnings, "; "))});

    r.explanation = templated_explanation(r);
    if (session) {
        ChatExchange ex;
        ex.messages.push_back({Role::system,
                               "Explain the model choice to a forecasting user in a few sentences. Use only numbers "
                               "from the context block; do not compute new ones."});
        ex.messages.push_back({Role::user, context_block(r)});
        try {
            const AssistantMessage reply = llm_chat(session->config, ex, *session->transport);
            if (!reply.text.empty()) r.explanation += "\n\n" + reply.text;
        } catch (const Error& e) {
            r.trace.push_back({"forecast", std::string("llm explanation failed (") + e.what() + "); kept template"});
        }
    }

    r.user_query_response = answer_query(query, r.forecast, freq, session);
    r.trace.push_back({"answer", query ? "answered query: " + *query : "no query; summary"});
    return r;
}

std::string serialize(const AgentResult& r) {
    std::ostringstream out;
    out << "mode: " << to_string(r.mode) << "\nh: " << r.h << "\nwindows: " << r.n_windows << "\n";
    out << "[features]\n";
    features::write_feature_csv(out, r.features);
    out << "[candidates]\n";
    for (const auto& c : r.candidates) out << c.alias << ": " << c.note << "\n";
    out << "[leaderboard]\n";
    evaluation::write_eval_csv(out, r.leaderboard);
    out << "[selected]\n" << r.selected << "\n" << r.rationale << "\n";
    out << "[forecast]\n" << forecast_table(r.forecast);
    for (const auto& w : r.forecast.warnings) out << "warning: " << w << "\n";
    out << "[explanation]\n" << r.explanation << "\n";
    out << "[answer]\n" << r.user_query_response << "\n";
    out << "[trace]\n";
    for (const auto& t : r.trace) out << t.step << ": " << t.detail << "\n";
    return out.str();
}

}  // namespace tsagent::agent
