#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsagent/adapters/http.hpp"
#include "tsagent/agent/llm.hpp"
#include "tsagent/core/panel.hpp"
#include "tsagent/evaluation/leaderboard.hpp"
#include "tsagent/features/features.hpp"

namespace tsagent::agent {

enum class AgentMode { deterministic, llm };

AgentMode parse_mode(std::string_view text);
std::string_view to_string(AgentMode mode);

struct AgentConfig {
    AgentMode mode = AgentMode::deterministic;
    std::size_t budget = 5;  ///< max candidates sent to cross-validation
    int n_windows = 2;
    int step = 0;  ///< 0 means step = h
    QuantileLevels levels;
    std::size_t jobs = 0;
};

/// A chat model plus the transport used to reach it.
struct LlmSession {
    LLMConfig config;
    std::shared_ptr<adapters::HttpTransport> transport;
};

struct Candidate {
    std::string alias;
    std::string note;  ///< one-line modelling assumption
    friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct TraceStep {
    std::string step;  ///< features, candidates, cv, select, forecast, answer
    std::string detail;
    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

struct AgentResult {
    AgentMode mode = AgentMode::deterministic;
    int h = 0;
    int n_windows = 0;
    features::FeatureReport features;
    std::vector<Candidate> candidates;
    evaluation::EvalReport leaderboard;
    std::string selected;
    std::string rationale;
    ForecastFrame forecast;  ///< quantile rows monotonized
    std::string explanation;
    std::string user_query_response;
    std::vector<TraceStep> trace;
};

/// Rule-table proposal, in priority order and before budget truncation:
///  1. seasonal_strength >= 0.6 and n >= 2m (m > 1): seasonalnaive, autoets, theta;
///     otherwise the non-seasonal baselines naive, ses
///  2. intermittency >= 0.3: croston, adida
///  3. KPSS rejects level stationarity or trend_strength >= 0.6: autoets, autoarima, theta
///     (autoarima only when n >= 20 and the series is not intermittent)
///  4. naive
///  5. n >= 20 and not intermittent: autoarima
/// Rules run per series; lists are merged in series order. Duplicates keep their first position.
std::vector<std::string> rule_table(const features::SeriesFeatures& f);

/// Ordered candidates (at least one) truncated to the budget, each with its assumption note.
/// In llm mode the model is asked through a propose_models tool; aliases outside `registry`
/// are dropped and an empty or failed answer falls back to the rule table.
std::vector<Candidate> propose_candidates(const features::FeatureReport& features, const AgentConfig& config,
                                          std::span<const std::string_view> registry,
                                          const LlmSession* llm = nullptr, std::vector<TraceStep>* trace = nullptr);

/// Deterministic grammar: "how many/total ... next N" -> sum of the first N points,
/// "average" -> mean, "peak/max" -> maximum with its timestamp, anything else -> summary.
/// Multi-series frames are summed per step first. With an LLM session the model answers from
/// the forecast table; failures fall back to the grammar.
std::string answer_query(const std::optional<std::string>& query, const ForecastFrame& forecast,
                         Frequency freq, const LlmSession* llm = nullptr);

/// features -> candidates -> cv -> select -> forecast -> answer.
/// `llm` is required in llm mode and ignored in deterministic mode, which never uses the network.
AgentResult run_agent(const SeriesPanel& panel, const std::optional<std::string>& query, std::optional<int> h,
                      const AgentConfig& config, const std::optional<LlmSession>& llm = std::nullopt);

/// Canonical text rendering of the whole result (for reports and determinism checks).
std::string serialize(const AgentResult& result);

/// "6,163" style rendering used in answers: integers above 100 in magnitude, two decimals otherwise.
std::string format_grouped(double value);

/// Number rendering used in the explanation template.
std::string format_stat(double value);

}  // namespace tsagent::agent
