#include "tsagent/adapters/adapters.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "tsagent/core/error.hpp"
#include "tsagent/ensemble/ensemble.hpp"
#include "tsagent/models/registry.hpp"

namespace tsagent::adapters {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::string registry_listing() {
    std::string out;
    for (auto a : models::builtin_aliases()) {
        if (!out.empty()) out += ", ";
        out += a;
    }
    return out;
}

double parse_number(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v)) {
        throw Error(ErrorCategory::config, "adapter parameter '" + key + "' must be numeric, got '" + value + "'");
    }
    return v;
}

ModelSpec parse_adapter(std::string_view original, std::string_view url_text) {
    Url url = parse_url(url_text);
    ModelSpec spec;
    spec.kind = ModelKind::adapter;
    spec.url = url.base();
    for (const auto& [key, value] : url.query) {
        if (key == "timeout") {
            spec.timeout_seconds = parse_number(key, value);
            if (!(spec.timeout_seconds > 0)) throw Error(ErrorCategory::config, "adapter timeout must be > 0");
        } else if (key == "retries") {
            const double r = parse_number(key, value);
            if (r < 0 || r != std::floor(r)) throw Error(ErrorCategory::config, "adapter retries must be a non-negative integer");
            spec.max_retries = static_cast<int>(r);
        } else if (key == "backoff_ms") {
            const double b = parse_number(key, value);
            if (b < 0 || b != std::floor(b)) throw Error(ErrorCategory::config, "adapter backoff_ms must be a non-negative integer");
            spec.backoff_ms = static_cast<int>(b);
        } else {
            spec.params[key] = value;
        }
    }
    spec.alias = std::string(original);
    return spec;
}

json wire_array(std::span<const double> xs) {
    json arr = json::array();
    for (double x : xs) arr.push_back(wire_round(x));
    return arr;
}

std::vector<double> read_numbers(const json& arr, std::string_view what) {
    if (!arr.is_array()) throw Error(ErrorCategory::protocol, std::string(what) + " must be an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (const auto& v : arr) {
        if (!v.is_number()) throw Error(ErrorCategory::protocol, std::string(what) + " contains a non-numeric value");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string server_message(const std::string& body) {
    const json j = json::parse(body, nullptr, false);
    if (j.is_object() && j.contains("error") && j["error"].is_string()) return j["error"].get<std::string>();
    return body.empty() ? "no message" : body.substr(0, 200);
}

}  // namespace

double wire_round(double x) {
    if (!std::isfinite(x)) return x;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

ModelSpec parse_model_alias(std::string_view text) {
    const std::string s = trim(text);
    if (s.empty()) throw Error(ErrorCategory::invalid_argument, "empty model alias");
    constexpr std::string_view kAdapter = "adapter:";
    constexpr std::string_view kEnsemble = "median_ensemble:";
    if (s.starts_with(kAdapter)) return parse_adapter(s, std::string_view(s).substr(kAdapter.size()));
    if (s.starts_with(kEnsemble)) {
        ModelSpec spec;
        spec.kind = ModelKind::ensemble;
        spec.alias = s;
        std::string_view rest = std::string_view(s).substr(kEnsemble.size());
        while (true) {
            const auto plus = rest.find('+');
            const std::string member = trim(rest.substr(0, plus));
            if (member.empty()) throw Error(ErrorCategory::invalid_argument, "empty ensemble member in '" + s + "'");
            if (member.starts_with(kEnsemble)) {
                throw Error(ErrorCategory::invalid_argument, "nested ensembles are not supported");
            }
            spec.members.push_back(parse_model_alias(member));
            if (plus == std::string_view::npos) break;
            rest = rest.substr(plus + 1);
        }
        return spec;
    }
    if (!models::is_builtin(s)) {
        throw Error(ErrorCategory::invalid_argument,
                    "unknown model alias '" + s + "'; available: " + registry_listing() +
                        ", adapter:<url>, median_ensemble:<a>+<b>");
    }
    ModelSpec spec;
    spec.alias = s;
    return spec;
}

std::vector<ModelSpec> parse_model_list(std::string_view text) {
    std::vector<ModelSpec> out;
    while (true) {
        const auto comma = text.find(',');
        const std::string item = trim(text.substr(0, comma));
        if (!item.empty()) out.push_back(parse_model_alias(item));
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    if (out.empty()) throw Error(ErrorCategory::invalid_argument, "no models given");
    return out;
}

models::ForecasterPtr make_forecaster(const ModelSpec& spec, std::shared_ptr<HttpTransport> transport) {
    switch (spec.kind) {
        case ModelKind::builtin:
            return models::make_builtin(spec.alias);
        case ModelKind::adapter:
            return std::make_shared<RemoteForecaster>(spec, std::move(transport));
        case ModelKind::ensemble: {
            std::vector<models::ForecasterPtr> members;
            for (const auto& m : spec.members) members.push_back(make_forecaster(m, transport));
            return std::make_shared<ensemble::MedianEnsemble>(std::move(members));
        }
    }
    throw Error(ErrorCategory::invalid_argument, "unknown model kind");
}

std::string encode_request(const SeriesView& series, int h, const QuantileLevels& levels) {
    json body;
    body["id"] = std::string(series.id);
    body["freq"] = std::string(1, series.freq.code());
    json ds = json::array();
    for (auto t : series.ds) ds.push_back(format_timestamp(t));
    body["ds"] = std::move(ds);
    body["y"] = wire_array(series.y);
    body["h"] = h;
    body["levels"] = wire_array(levels.values());
    return body.dump();
}

RemoteForecaster::RemoteForecaster(ModelSpec spec, std::shared_ptr<HttpTransport> transport)
    : spec_(std::move(spec)), transport_(transport ? std::move(transport) : default_transport()) {
    if (spec_.kind != ModelKind::adapter) throw Error(ErrorCategory::invalid_argument, "not an adapter spec");
    if (!(spec_.timeout_seconds > 0)) throw Error(ErrorCategory::config, "adapter timeout must be > 0");
}

models::ModelOutput RemoteForecaster::forecast(const SeriesView& series, int h, const QuantileLevels& levels) const {
    HttpRequest request;
    request.method = "POST";
    request.url = spec_.url + "/forecast";
    request.body = encode_request(series, h, levels);
    if (!spec_.params.empty()) {
        json body = json::parse(request.body);
        body["params"] = spec_.params;
        request.body = body.dump();
    }
    request.timeout_seconds = spec_.timeout_seconds;

    RetryPolicy policy;
    policy.max_retries = spec_.max_retries;
    policy.backoff_base_ms = spec_.backoff_ms;
    policy.retry_status = [](int status) { return status >= 500; };
    const HttpResponse response = send_with_retry(*transport_, request, policy);

    if (response.status >= 400) {
        throw Error(ErrorCategory::request, spec_.alias + " rejected the request (HTTP " +
                                                std::to_string(response.status) + "): " + server_message(response.body));
    }
    if (response.status < 200 || response.status >= 300) {
        throw Error(ErrorCategory::protocol, spec_.alias + " answered with HTTP " + std::to_string(response.status));
    }
    const json j = json::parse(response.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCategory::protocol, spec_.alias + ": response is not a JSON object");
    if (!j.contains("mean")) throw Error(ErrorCategory::protocol, spec_.alias + ": response lacks 'mean'");

    models::ModelOutput out;
    out.mean = read_numbers(j["mean"], "mean");
    if (out.mean.size() != static_cast<std::size_t>(h)) {
        throw Error(ErrorCategory::protocol, spec_.alias + ": expected " + std::to_string(h) + " mean values, received " +
                                                 std::to_string(out.mean.size()));
    }
    if (j.contains("quantiles") && !j["quantiles"].is_null() && !levels.empty()) {
        const json& q = j["quantiles"];
        if (!q.is_object()) throw Error(ErrorCategory::protocol, spec_.alias + ": 'quantiles' must be an object");
        if (q.size() != levels.size()) {
            throw Error(ErrorCategory::protocol, spec_.alias + ": expected " + std::to_string(levels.size()) +
                                                     " quantile levels, received " + std::to_string(q.size()));
        }
        std::vector<std::vector<double>> columns(levels.size());
        for (const auto& [key, value] : q.items()) {
            double level = 0;
            auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), level);
            std::optional<std::size_t> idx;
            if (ec == std::errc{} && ptr == key.data() + key.size()) {
                for (std::size_t i = 0; i < levels.size(); ++i) {
                    if (std::abs(levels[i] - level) < 1e-9) idx = i;
                }
            }
            if (!idx) throw Error(ErrorCategory::protocol, spec_.alias + ": unexpected quantile level '" + key + "'");
            columns[*idx] = read_numbers(value, "quantile " + key);
            if (columns[*idx].size() != static_cast<std::size_t>(h)) {
                throw Error(ErrorCategory::protocol, spec_.alias + ": expected " + std::to_string(h) +
                                                         " values for quantile " + key + ", received " +
                                                         std::to_string(columns[*idx].size()));
            }
        }
        out.quantiles.resize(static_cast<std::size_t>(h) * levels.size());
        for (std::size_t k = 0; k < static_cast<std::size_t>(h); ++k) {
            for (std::size_t l = 0; l < levels.size(); ++l) out.quantiles[k * levels.size() + l] = columns[l][k];
        }
    }
    return out;
}

ForecastFrame remote_forecast(const ModelSpec& spec, const SeriesPanel& panel, int h, const QuantileLevels& levels,
                              std::shared_ptr<HttpTransport> transport, std::size_t jobs) {
    const RemoteForecaster model(spec, std::move(transport));
    return models::forecast_panel(model, panel, h, levels, jobs);
}

}  // namespace tsagent::adapters
