#include <doctest.h>

#include <json.hpp>
#include <httplib.h>

#include "fixtures.hpp"
#include "tsagent/adapters/adapters.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/models/registry.hpp"

using namespace tsagent;
using namespace tsagent::adapters;
using namespace std::chrono_literals;

namespace {

const QuantileLevels kDeciles;

ErrorCategory category_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.category();
    }
    FAIL("expected tsagent::Error");
    return ErrorCategory::usage;
}

std::vector<SeriesPanel> fixture_panels() {
    const Frequency monthly = Frequency::of(FrequencyUnit::monthly);
    std::vector<SeriesPanel> out;
    out.push_back(fixtures::air_passengers());
    out.push_back(fixtures::single(fixtures::seasonal_series(60, 8, 1.5, 21, 50, 0.2), monthly));
    auto rw = fixtures::random_walk(80, 9);
    for (auto& v : rw) v += 100;
    out.push_back(fixtures::single(rw, monthly));
    return out;
}

}  // namespace

TEST_CASE("parse_model_alias") {
    const auto b = parse_model_alias("seasonalnaive");
    CHECK(b.kind == ModelKind::builtin);
    CHECK(b.alias == "seasonalnaive");

    const auto a = parse_model_alias("adapter:http://localhost:8008");
    CHECK(a.kind == ModelKind::adapter);
    CHECK(a.url == "http://localhost:8008");
    CHECK(a.timeout_seconds == 30.0);
    CHECK(a.max_retries == 2);

    const auto q = parse_model_alias("adapter:http://h:9/v1?timeout=2.5&retries=0&backoff_ms=7&variant=small");
    CHECK(q.url == "http://h:9/v1");
    CHECK(q.timeout_seconds == 2.5);
    CHECK(q.max_retries == 0);
    CHECK(q.backoff_ms == 7);
    CHECK(q.params.at("variant") == "small");

    const auto e = parse_model_alias("median_ensemble:naive+theta");
    CHECK(e.kind == ModelKind::ensemble);
    REQUIRE(e.members.size() == 2);
    CHECK(e.members[0].alias == "naive");
    CHECK(e.members[1].alias == "theta");

    CHECK(category_of([] { parse_model_alias("prophet"); }) == ErrorCategory::invalid_argument);
    try {
        parse_model_alias("prophet");
    } catch (const Error& err) {
        CHECK(std::string(err.what()).find("seasonalnaive") != std::string::npos);
    }
    CHECK(category_of([] { parse_model_alias("adapter:localhost"); }) == ErrorCategory::config);
    CHECK(category_of([] { parse_model_alias("adapter:ftp://x"); }) == ErrorCategory::config);
    CHECK(category_of([] { parse_model_alias("median_ensemble:naive+median_ensemble:theta"); }) ==
          ErrorCategory::invalid_argument);

    const auto list = parse_model_list("naive,theta,adapter:http://x:1");
    CHECK(list.size() == 3);
    CHECK(list[2].kind == ModelKind::adapter);
}

TEST_CASE("wire format") {
    CHECK(wire_round(1.0 / 3.0) == 0.333333333333);
    CHECK(wire_round(112.0) == 112.0);
    const auto panel = fixtures::single({1.5, 2.25, 3.0}, Frequency::of(FrequencyUnit::monthly));
    const auto body = nlohmann::json::parse(encode_request(panel.view(0), 2, QuantileLevels{0.1, 0.9}));
    CHECK(body["h"] == 2);
    CHECK(body["freq"] == "M");
    CHECK(body["y"].size() == 3);
    CHECK(body["ds"][0] == "2000-01-01");
    CHECK(body["levels"].size() == 2);
}

TEST_CASE("stub health and malformed body") {
    auto stub = serve_stub("127.0.0.1:0");
    REQUIRE(stub->port() > 0);
    httplib::Client client("127.0.0.1", stub->port());
    const auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    const auto hj = nlohmann::json::parse(health->body);
    CHECK(hj["status"] == "ok");
    CHECK(hj["model"] == "seasonalnaive");

    const auto bad = client.Post("/forecast", "{not json", "application/json");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK_FALSE(nlohmann::json::parse(bad->body)["error"].get<std::string>().empty());
    CHECK(stub->forecast_requests() == 1);

    CHECK(category_of([&] { serve_stub("127.0.0.1:" + std::to_string(stub->port())); }) == ErrorCategory::bind);
}

TEST_CASE("round trip equals the local model for every builtin") {
    const auto panels = fixture_panels();
    for (auto alias : models::builtin_aliases()) {
        StubBehavior behavior;
        behavior.alias = std::string(alias);
        auto stub = serve_stub("127.0.0.1:0", behavior);
        const auto spec = parse_model_alias("adapter:" + stub->base_url());
        const auto local_model = models::make_builtin(alias);
        for (const auto& panel : panels) {
            const auto remote = remote_forecast(spec, panel, 12, kDeciles, nullptr, 1);
            const auto local = models::forecast_panel(*local_model, panel, 12, kDeciles, 1);
            REQUIRE(remote.series.size() == local.series.size());
            const auto& r = remote.series[0];
            const auto& l = local.series[0];
            CHECK(r.ds == l.ds);
            REQUIRE(r.mean.size() == l.mean.size());
            REQUIRE(r.quantiles.size() == l.quantiles.size());
            for (std::size_t i = 0; i < r.mean.size(); ++i) {
                CHECK_MESSAGE(std::fabs(r.mean[i] - l.mean[i]) <= 1e-9, alias);
            }
            for (std::size_t i = 0; i < r.quantiles.size(); ++i) {
                CHECK_MESSAGE(std::fabs(r.quantiles[i] - l.quantiles[i]) <= 1e-9, alias);
            }
            if (&panel == &panels.front()) {
                // integer inputs travel exactly, so outputs agree at wire precision
                for (std::size_t i = 0; i < r.mean.size(); ++i) CHECK(r.mean[i] == wire_round(l.mean[i]));
            }
        }
    }
}

TEST_CASE("fixed payload echo and shape errors") {
    const auto panel = fixtures::single({1, 2, 3, 4, 5}, Frequency::of(FrequencyUnit::monthly));
    StubBehavior echo;
    echo.fixed_response = R"({"model":"x","mean":[1.5,-2,3e3],"quantiles":{"0.1":[1,2,3],"0.9":[4,5,6]}})";
    auto stub = serve_stub("127.0.0.1:0", echo);
    const auto spec = parse_model_alias("adapter:" + stub->base_url());
    const auto f = remote_forecast(spec, panel, 3, QuantileLevels{0.1, 0.9});
    CHECK(f.series[0].mean == std::vector{1.5, -2.0, 3000.0});
    CHECK(f.series[0].quantiles == std::vector<double>{1, 4, 2, 5, 3, 6});

    CHECK(category_of([&] { remote_forecast(spec, panel, 4, QuantileLevels{0.1, 0.9}); }) == ErrorCategory::protocol);
    try {
        remote_forecast(spec, panel, 4, QuantileLevels{0.1, 0.9});
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("expected 4") != std::string::npos);
        CHECK(std::string(e.what()).find("received 3") != std::string::npos);
    }
    // h-1 points from the mirrored model path
    StubBehavior short_answer;
    short_answer.fixed_response = R"({"model":"x","mean":[1,2]})";
    auto stub2 = serve_stub("127.0.0.1:0", short_answer);
    CHECK(category_of([&] {
              remote_forecast(parse_model_alias("adapter:" + stub2->base_url()), panel, 3, QuantileLevels::none());
          }) == ErrorCategory::protocol);
}

TEST_CASE("timeout and retry budget") {
    const auto panel = fixtures::single({1, 2, 3, 4, 5}, Frequency::of(FrequencyUnit::monthly));

    StubBehavior slow;
    slow.delay = 1500ms;
    auto stub = serve_stub("127.0.0.1:0", slow);
    const auto spec = parse_model_alias("adapter:" + stub->base_url() + "?timeout=0.3&retries=0");
    CHECK(category_of([&] { remote_forecast(spec, panel, 2, QuantileLevels::none()); }) == ErrorCategory::transport);
    std::this_thread::sleep_for(200ms);
    CHECK(stub->forecast_requests() == 1);

    for (int r : {0, 1, 3}) {
        StubBehavior failing;
        failing.scripted_statuses = std::vector<int>(10, 503);
        auto s = serve_stub("127.0.0.1:0", failing);
        const auto sp =
            parse_model_alias("adapter:" + s->base_url() + "?retries=" + std::to_string(r) + "&backoff_ms=1");
        CHECK(category_of([&] { remote_forecast(sp, panel, 2, QuantileLevels::none()); }) == ErrorCategory::transport);
        CHECK(s->forecast_requests() == static_cast<std::size_t>(r + 1));
    }

    StubBehavior recovering;
    recovering.alias = "naive";
    recovering.scripted_statuses = {500, 502};
    auto s2 = serve_stub("127.0.0.1:0", recovering);
    const auto ok = remote_forecast(parse_model_alias("adapter:" + s2->base_url() + "?retries=2&backoff_ms=1"), panel,
                                    2, QuantileLevels::none());
    CHECK(ok.series[0].mean == std::vector{5.0, 5.0});
    CHECK(s2->forecast_requests() == 3);

    StubBehavior rejecting;
    rejecting.scripted_statuses = {422, 422, 422};
    auto s3 = serve_stub("127.0.0.1:0", rejecting);
    CHECK(category_of([&] {
              remote_forecast(parse_model_alias("adapter:" + s3->base_url() + "?retries=3&backoff_ms=1"), panel, 2,
                              QuantileLevels::none());
          }) == ErrorCategory::request);
    CHECK(s3->forecast_requests() == 1);
}

TEST_CASE("extra query keys travel as params") {
    const auto panel = fixtures::single({1, 2, 3}, Frequency::of(FrequencyUnit::monthly));
    auto transport = std::make_shared<ScriptedTransport>([](const HttpRequest& req) {
        const auto body = nlohmann::json::parse(req.body);
        CHECK(req.url == "http://h:1/v1/forecast");
        CHECK(body["params"]["variant"] == "small");
        return HttpResponse{200, R"({"mean":[3]})", ""};
    });
    const auto spec = parse_model_alias("adapter:http://h:1/v1?variant=small&retries=0");
    CHECK(remote_forecast(spec, panel, 1, QuantileLevels::none(), transport).series[0].mean == std::vector{3.0});
    CHECK(transport->count() == 1);
}

TEST_CASE("send_with_retry against a scripted transport") {
    int calls = 0;
    ScriptedTransport t([&](const HttpRequest&) {
        ++calls;
        return calls < 3 ? HttpResponse{0, "", "connection refused"} : HttpResponse{200, "{}", ""};
    });
    RetryPolicy policy{2, 0, [](int s) { return s >= 500; }};
    CHECK(send_with_retry(t, HttpRequest{}, policy).status == 200);
    CHECK(t.count() == 3);

    ScriptedTransport dead([](const HttpRequest&) { return HttpResponse{0, "", "refused"}; });
    CHECK(category_of([&] { send_with_retry(dead, HttpRequest{}, RetryPolicy{1, 0, nullptr}); }) ==
          ErrorCategory::transport);
    CHECK(dead.count() == 2);

    ScriptedTransport nf([](const HttpRequest&) { return HttpResponse{404, R"({"error":"nope"})", ""}; });
    CHECK(send_with_retry(nf, HttpRequest{}, policy).status == 404);
    CHECK(nf.count() == 1);
}

TEST_CASE("remote model inside an ensemble") {
    auto stub = serve_stub("127.0.0.1:0");
    const auto spec = parse_model_alias("median_ensemble:naive+adapter:" + stub->base_url() + "+theta");
    REQUIRE(spec.members.size() == 3);
    const auto model = make_forecaster(spec);
    const auto panel = fixtures::air_passengers();
    const auto out = model->forecast(panel.view(0), 12, kDeciles);
    CHECK(out.mean.size() == 12);
    CHECK(out.quantiles.size() == 108);
    CHECK(stub->forecast_requests() == 1);
}
