#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsagent/adapters/http.hpp"
#include "tsagent/models/forecaster.hpp"

namespace tsagent::adapters {

enum class ModelKind { builtin, adapter, ensemble };

/// Parsed model specification, e.g. "theta", "adapter:http://host:8008?timeout=5",
/// "median_ensemble:naive+theta".
struct ModelSpec {
    std::string alias;  ///< the text it was parsed from (builtins: the registry name)
    ModelKind kind = ModelKind::builtin;

    // adapter fields
    std::string url;  ///< base URL without query
    double timeout_seconds = 30.0;
    int max_retries = 2;
    int backoff_ms = 100;
    std::map<std::string, std::string> params;

    // ensemble members
    std::vector<ModelSpec> members;
};

/// Throws Error(invalid_argument) for unknown builtins and Error(config) for malformed URLs.
ModelSpec parse_model_alias(std::string_view text);

/// Comma-separated list of specs. Commas inside an adapter URL query are not supported.
std::vector<ModelSpec> parse_model_list(std::string_view text);

/// Builds the forecaster for a spec. Adapter forecasters use `transport` (default: httplib).
models::ForecasterPtr make_forecaster(const ModelSpec& spec, std::shared_ptr<HttpTransport> transport = nullptr);

/// Client side of the adapter protocol. Thread-safe; one request per series.
class RemoteForecaster final : public models::Forecaster {
public:
    RemoteForecaster(ModelSpec spec, std::shared_ptr<HttpTransport> transport = nullptr);
    std::string name() const override { return spec_.alias; }
    bool supports_quantiles() const override { return true; }
    models::ModelOutput forecast(const SeriesView& series, int h, const QuantileLevels& levels) const override;

    const ModelSpec& spec() const noexcept { return spec_; }

private:
    ModelSpec spec_;
    std::shared_ptr<HttpTransport> transport_;
};

/// remote_forecast over a whole panel: future timestamps are computed locally.
ForecastFrame remote_forecast(const ModelSpec& spec, const SeriesPanel& panel, int h, const QuantileLevels& levels,
                              std::shared_ptr<HttpTransport> transport = nullptr, std::size_t jobs = 0);

/// JSON request body for one series (numbers at 12 significant digits).
std::string encode_request(const SeriesView& series, int h, const QuantileLevels& levels);

/// Rounds to 12 significant digits, the precision of the wire format.
double wire_round(double x);

/// Test hooks for the stub server.
struct StubBehavior {
    std::string alias = "seasonalnaive";
    std::chrono::milliseconds delay{0};
    /// Statuses returned (with an error body) for the first requests, in order, before normal service.
    std::vector<int> scripted_statuses;
    /// Raw JSON returned for every successful /forecast instead of the mirrored model.
    std::optional<std::string> fixed_response;
};

/// Running stub server; stops and joins on destruction.
class StubServer {
public:
    virtual ~StubServer() = default;
    virtual int port() const = 0;
    virtual std::string base_url() const = 0;
    /// Requests received on POST /forecast (including rejected ones).
    virtual std::size_t forecast_requests() const = 0;
    virtual void stop() = 0;
};

/// Binds "host:port" (port 0 picks a free port) and serves the adapter protocol by delegating
/// to the builtin model named in `behavior`. Throws Error(bind) when the address is unavailable.
std::unique_ptr<StubServer> serve_stub(std::string_view bind, StubBehavior behavior = {});

}  // namespace tsagent::adapters
