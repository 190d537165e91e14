#include <doctest.h>

#include <algorithm>
#include <cstdlib>

#include "agent_support.hpp"
#include "fixtures.hpp"
#include "tsagent/agent/agent.hpp"
#include "tsagent/agent/llm.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/models/registry.hpp"

using namespace tsagent;
using namespace tsagent::agent;
using adapters::HttpRequest;
using adapters::HttpResponse;
using adapters::ScriptedTransport;

namespace {

constexpr const char* kKeyVar = "TSAGENT_TEST_LLM_KEY";

LLMConfig test_config() {
    auto c = LLMConfig::parse("local:test-model", "http://127.0.0.1:9", kKeyVar);
    c.backoff_ms = 0;
    return c;
}

features::SeriesFeatures feat(std::size_t n, int m, double trend, double seasonal, bool stationary,
                              double zeros) {
    features::SeriesFeatures f;
    f.id = "s";
    f.n = n;
    f.season_length = m;
    f.trend_strength = trend;
    f.seasonal_strength = seasonal;
    f.kpss_stat = stationary ? 0.1 : 1.0;
    f.kpss_level_stationary = stationary;
    f.intermittency = zeros;
    return f;
}

ForecastFrame monthly_frame(std::vector<double> mean) {
    ForecastFrame f;
    f.model = "m";
    SeriesForecast s;
    s.id = "s";
    const auto t0 = fixtures::ts("1961-01-01");
    for (std::size_t k = 0; k < mean.size(); ++k) {
        s.ds.push_back(advance(t0, Frequency::of(FrequencyUnit::monthly), static_cast<std::int64_t>(k)));
    }
    s.mean = std::move(mean);
    f.series.push_back(std::move(s));
    return f;
}

struct EnvGuard {
    explicit EnvGuard(const char* value) {
        if (value) {
            setenv(kKeyVar, value, 1);
        } else {
            unsetenv(kKeyVar);
        }
    }
    ~EnvGuard() { unsetenv(kKeyVar); }
};

}  // namespace

TEST_CASE("rule table") {
    SUBCASE("strongly seasonal monthly") {
        const auto c = rule_table(feat(144, 12, 0.96, 0.76, false, 0));
        REQUIRE(c.size() >= 3);
        CHECK(std::vector(c.begin(), c.begin() + 3) == std::vector<std::string>{"seasonalnaive", "autoets", "theta"});
        CHECK(std::find(c.begin(), c.end(), "autoarima") != c.end());
    }
    SUBCASE("too short for seasonal candidates") {
        const auto c = rule_table(feat(18, 12, 0.1, 0.9, true, 0));
        CHECK(std::find(c.begin(), c.end(), "seasonalnaive") == c.end());
        CHECK(std::find(c.begin(), c.end(), "naive") != c.end());
        CHECK(std::find(c.begin(), c.end(), "ses") != c.end());
    }
    SUBCASE("intermittent") {
        const auto c = rule_table(feat(60, 12, 0.1, 0.1, true, 0.5));
        CHECK(std::find(c.begin(), c.end(), "croston") != c.end());
        CHECK(std::find(c.begin(), c.end(), "adida") != c.end());
        CHECK(std::find(c.begin(), c.end(), "autoarima") == c.end());
    }
    SUBCASE("trending nonstationary") {
        const auto c = rule_table(feat(100, 1, 0.9, 0.0, false, 0));
        CHECK(std::find(c.begin(), c.end(), "autoets") != c.end());
        CHECK(std::find(c.begin(), c.end(), "autoarima") != c.end());
        CHECK(std::find(c.begin(), c.end(), "theta") != c.end());
    }
    for (const auto& alias : rule_table(feat(50, 4, 0.7, 0.7, false, 0.4))) CHECK(models::is_builtin(alias));
}

TEST_CASE("propose_candidates respects the budget and notes") {
    features::FeatureReport report;
    report.rows.push_back(feat(144, 12, 0.96, 0.76, false, 0));
    AgentConfig cfg;
    cfg.budget = 2;
    const auto c = propose_candidates(report, cfg, models::builtin_aliases());
    REQUIRE(c.size() == 2);
    CHECK(c[0].alias == "seasonalnaive");
    CHECK_FALSE(c[0].note.empty());
}

TEST_CASE("LLMConfig parsing") {
    const auto o = LLMConfig::parse("openai:gpt-4o-mini");
    CHECK(o.credential_env == "OPENAI_API_KEY");
    CHECK(o.endpoint == "https://api.openai.com/v1");
    CHECK(o.spec() == "openai:gpt-4o-mini");
    CHECK_THROWS_AS(LLMConfig::parse("local:x"), Error);
    CHECK_THROWS_AS(LLMConfig::parse("nocolon"), Error);
    CHECK(test_config().credential_env == kKeyVar);
}

TEST_CASE("llm_chat with a scripted transport") {
    EnvGuard env("secret-token");
    ChatExchange ex;
    ex.messages.push_back({Role::user, "hi"});

    SUBCASE("plain text and request shape") {
        ScriptedTransport t([](const HttpRequest& req) {
            CHECK(req.url == "http://127.0.0.1:9/chat/completions");
            const bool auth = std::any_of(req.headers.begin(), req.headers.end(), [](const auto& h) {
                return h.first == "Authorization" && h.second == "Bearer secret-token";
            });
            CHECK(auth);
            const auto body = nlohmann::json::parse(req.body);
            CHECK(body["model"] == "test-model");
            CHECK(body["temperature"] == 0.0);
            return HttpResponse{200, agent_support::text_reply("hello"), ""};
        });
        CHECK(llm_chat(test_config(), ex, t).text == "hello");
        CHECK(t.count() == 1);
    }
    SUBCASE("tool call") {
        ex.tools.push_back({"propose_models", "d", {{"type", "object"}}});
        ScriptedTransport t([](const HttpRequest&) {
            return HttpResponse{200, agent_support::tool_reply("propose_models", {{"candidates", {"theta"}}}), ""};
        });
        const auto reply = llm_chat(test_config(), ex, t);
        REQUIRE(reply.tool_call);
        CHECK(reply.tool_call->name == "propose_models");
        CHECK(reply.tool_call->arguments["candidates"][0] == "theta");
    }
    SUBCASE("undeclared tool is a protocol error") {
        ScriptedTransport t([](const HttpRequest&) {
            return HttpResponse{200, agent_support::tool_reply("rm_rf", nlohmann::json::object()), ""};
        });
        try {
            llm_chat(test_config(), ex, t);
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.category() == ErrorCategory::protocol);
        }
    }
    SUBCASE("429 retried") {
        ScriptedTransport t([n = 0](const HttpRequest&) mutable {
            return ++n < 3 ? HttpResponse{429, "{}", ""} : HttpResponse{200, agent_support::text_reply("ok"), ""};
        });
        CHECK(llm_chat(test_config(), ex, t).text == "ok");
        CHECK(t.count() == 3);
    }
    SUBCASE("401 not retried") {
        ScriptedTransport t([](const HttpRequest&) { return HttpResponse{401, R"({"error":"bad key"})", ""}; });
        try {
            llm_chat(test_config(), ex, t);
            FAIL("expected error");
        } catch (const Error& e) {
            CHECK(e.category() == ErrorCategory::request);
        }
        CHECK(t.count() == 1);
    }
}

TEST_CASE("missing credential fails before any request") {
    EnvGuard env(nullptr);
    ScriptedTransport t([](const HttpRequest&) { return HttpResponse{200, agent_support::text_reply("x"), ""}; });
    ChatExchange ex;
    ex.messages.push_back({Role::user, "hi"});
    try {
        llm_chat(test_config(), ex, t);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::config);
    }
    CHECK(t.count() == 0);

    auto transport = std::make_shared<ScriptedTransport>(
        [](const HttpRequest&) { return HttpResponse{200, agent_support::text_reply("x"), ""}; });
    AgentConfig cfg;
    cfg.mode = AgentMode::llm;
    try {
        run_agent(fixtures::air_passengers(), std::nullopt, 12, cfg, LlmSession{test_config(), transport});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::config);
    }
    CHECK(transport->count() == 0);
}

TEST_CASE("answer_query grammar") {
    std::vector<double> v;
    for (int i = 1; i <= 12; ++i) v.push_back(i);
    const auto f = monthly_frame(v);
    const Frequency monthly = Frequency::of(FrequencyUnit::monthly);
    CHECK(answer_query("How many passengers in the next 12 months?", f, monthly).find("78") != std::string::npos);
    CHECK(answer_query("total for the next 3 months", f, monthly).find(" 6 ") != std::string::npos);
    CHECK(answer_query("what is the average?", f, monthly).find("6.50") != std::string::npos);
    const auto peak = answer_query("when is the peak?", f, monthly);
    CHECK(peak.find("12") != std::string::npos);
    CHECK(peak.find("1961-12-01") != std::string::npos);
    const auto summary = answer_query(std::nullopt, f, monthly);
    CHECK(summary.find("78") != std::string::npos);
    const auto clamped = answer_query("how many in the next 24 months", f, monthly);
    CHECK(clamped.find("78") != std::string::npos);
    CHECK(clamped.find("12") != std::string::npos);
    CHECK(format_grouped(6163.4) == "6,163");
    CHECK(format_grouped(1234567.0) == "1,234,567");
    CHECK(format_grouped(6.5) == "6.50");
    CHECK(format_grouped(-1500.0) == "-1,500");
}

TEST_CASE("deterministic agent on AirPassengers") {
    const auto panel = fixtures::air_passengers();
    AgentConfig cfg;
    cfg.jobs = 1;
    auto counting = std::make_shared<ScriptedTransport>(
        [](const HttpRequest&) { return HttpResponse{200, agent_support::text_reply("x"), ""}; });
    const auto a = run_agent(panel, "How many passengers in the next 12 months?", 12, cfg,
                             LlmSession{test_config(), counting});
    CHECK(counting->count() == 0);
    const auto b = run_agent(panel, "How many passengers in the next 12 months?", 12, cfg);
    CHECK(serialize(a) == serialize(b));

    CHECK(a.h == 12);
    CHECK(a.n_windows == 2);
    double sum = 0.0;
    for (double x : a.forecast.series[0].mean) sum += x;
    CHECK(sum >= 0.9 * 5919);
    CHECK(sum <= 1.1 * 5919);
    CHECK(a.user_query_response.find(format_grouped(sum)) != std::string::npos);
    CHECK(a.selected == a.leaderboard.scores.front().model);
    CHECK(agent_support::number_tokens(a.explanation).size() > 10);
    CHECK(agent_support::ungrounded_numbers(a).empty());
    const std::vector<std::string> steps{"features", "candidates", "cv", "select", "forecast", "answer"};
    for (const auto& s : steps) {
        CHECK(std::any_of(a.trace.begin(), a.trace.end(), [&](const TraceStep& t) { return t.step == s; }));
    }
    for (const auto& c : a.candidates) CHECK(models::is_builtin(c.alias));
}

TEST_CASE("agent input errors") {
    try {
        run_agent(SeriesPanel{}, std::nullopt, 12, AgentConfig{});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::insufficient_data);
    }
    try {
        run_agent(fixtures::single(std::vector(10, 1.0), Frequency::of(FrequencyUnit::monthly)), std::nullopt, 12,
                  AgentConfig{});
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::series_too_short);
    }
    // windows reduced to fit
    const auto r = run_agent(fixtures::single(fixtures::seasonal_series(20, 5, 1, 2), Frequency::of(FrequencyUnit::monthly)),
                             std::nullopt, 12, AgentConfig{});
    CHECK(r.n_windows == 1);
}

TEST_CASE("llm mode with an adversarial model") {
    EnvGuard env("k");
    const auto panel = fixtures::air_passengers();
    auto transport = std::make_shared<ScriptedTransport>([](const HttpRequest& req) {
        const auto tool = agent_support::offered_tool(req.body);
        if (tool == "propose_models") {
            return HttpResponse{
                200,
                agent_support::tool_reply("propose_models",
                                          {{"candidates", {"gpt_oracle", "../../bin/sh", "theta", "THETA", ""}}}),
                ""};
        }
        if (tool == "set_horizon") return HttpResponse{200, agent_support::tool_reply("set_horizon", {{"h", 6}}), ""};
        return HttpResponse{200, agent_support::text_reply("The forecast uses 99999 passengers."), ""};
    });
    AgentConfig cfg;
    cfg.mode = AgentMode::llm;
    cfg.jobs = 1;
    const auto r = run_agent(panel, "next 6 months?", std::nullopt, cfg, LlmSession{test_config(), transport});
    CHECK(transport->count() >= 2);
    CHECK(r.h == 6);
    REQUIRE(r.candidates.size() == 1);
    CHECK(r.candidates[0].alias == "theta");
    for (const auto& s : r.leaderboard.scores) CHECK(models::is_builtin(s.model));
    const bool logged = std::any_of(r.trace.begin(), r.trace.end(), [](const TraceStep& t) {
        return t.detail.find("gpt_oracle") != std::string::npos;
    });
    CHECK(logged);

    SUBCASE("nothing valid falls back to the rule table") {
        auto junk = std::make_shared<ScriptedTransport>([](const HttpRequest& req) {
            if (agent_support::offered_tool(req.body) == "propose_models") {
                return HttpResponse{200, agent_support::tool_reply("propose_models", {{"candidates", {"x", "y"}}}),
                                    ""};
            }
            return HttpResponse{500, "{}", ""};
        });
        auto c = test_config();
        c.max_retries = 0;
        const auto fr = run_agent(panel, std::nullopt, 12, cfg, LlmSession{c, junk});
        CHECK(fr.candidates.front().alias == "seasonalnaive");
    }
}
