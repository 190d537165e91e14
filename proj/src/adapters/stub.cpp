#include <httplib.h>

#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <thread>

#include "tsagent/adapters/adapters.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/models/registry.hpp"

namespace tsagent::adapters {

using nlohmann::json;

namespace {

std::string level_key(double level) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", level);
    return buf;
}

json wire_array(std::span<const double> xs) {
    json arr = json::array();
    for (double x : xs) arr.push_back(wire_round(x));
    return arr;
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
    res.status = status;
    res.set_content(json{{"error", message}}.dump(), "application/json");
}

struct Decoded {
    Series series;
    Frequency freq;
    int h = 0;
    QuantileLevels levels = QuantileLevels::none();
};

// Throws std::invalid_argument with a client-facing message.
Decoded decode(const std::string& body) {
    const json j = json::parse(body, nullptr, false);
    auto bad = [](const std::string& m) { return std::invalid_argument(m); };
    if (j.is_discarded() || !j.is_object()) throw bad("request body is not a JSON object");
    for (const char* key : {"id", "freq", "ds", "y", "h"}) {
        if (!j.contains(key)) throw bad(std::string("missing field '") + key + "'");
    }
    Decoded d;
    if (!j["id"].is_string()) throw bad("'id' must be a string");
    d.series.id = j["id"].get<std::string>();
    if (!j["freq"].is_string()) throw bad("'freq' must be a string");
    try {
        d.freq = Frequency::from_code(j["freq"].get<std::string>());
    } catch (const Error& e) {
        throw bad(e.what());
    }
    if (!j["h"].is_number_integer() || j["h"].get<long long>() < 1 || j["h"].get<long long>() > 100000) {
        throw bad("'h' must be a positive integer");
    }
    d.h = j["h"].get<int>();
    if (!j["ds"].is_array() || !j["y"].is_array()) throw bad("'ds' and 'y' must be arrays");
    if (j["ds"].size() != j["y"].size()) throw bad("'ds' and 'y' differ in length");
    if (j["y"].empty()) throw bad("empty series");
    for (const auto& t : j["ds"]) {
        if (!t.is_string()) throw bad("'ds' must hold ISO-8601 strings");
        auto ts = parse_timestamp(t.get<std::string>());
        if (!ts) throw bad("unparseable timestamp '" + t.get<std::string>() + "'");
        d.series.ds.push_back(*ts);
    }
    for (const auto& v : j["y"]) {
        if (!v.is_number()) throw bad("'y' must hold numbers");
        d.series.y.push_back(v.get<double>());
    }
    if (j.contains("levels")) {
        if (!j["levels"].is_array()) throw bad("'levels' must be an array");
        std::vector<double> levels;
        for (const auto& v : j["levels"]) {
            if (!v.is_number()) throw bad("'levels' must hold numbers");
            levels.push_back(v.get<double>());
        }
        try {
            d.levels = QuantileLevels(std::move(levels));
        } catch (const Error& e) {
            throw bad(e.what());
        }
    }
    return d;
}

class HttplibStub final : public StubServer {
public:
    HttplibStub(const std::string& host, int port, StubBehavior behavior)
        : behavior_(std::move(behavior)), model_(models::make_builtin(behavior_.alias)), host_(host) {
        server_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(json{{"status", "ok"}, {"model", behavior_.alias}}.dump(), "application/json");
        });
        server_.Post("/forecast", [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); });
        // httplib's default SO_REUSEPORT would let a second server share a busy port.
        server_.set_socket_options([](socket_t sock) {
            int yes = 1;
            setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
        });

        if (port == 0) {
            port_ = server_.bind_to_any_port(host);
            if (port_ < 0) throw Error(ErrorCategory::bind, "cannot bind " + host + ":0");
        } else {
            if (!server_.bind_to_port(host, port)) {
                throw Error(ErrorCategory::bind, "cannot bind " + host + ":" + std::to_string(port));
            }
            port_ = port;
        }
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~HttplibStub() override { stop(); }

    int port() const override { return port_; }
    std::string base_url() const override { return "http://" + host_ + ":" + std::to_string(port_); }
    std::size_t forecast_requests() const override { return requests_.load(); }

    void stop() override {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

private:
    void handle(const httplib::Request& req, httplib::Response& res) {
        const std::size_t index = requests_.fetch_add(1);
        const auto started = std::chrono::steady_clock::now();
        if (behavior_.delay.count() > 0) std::this_thread::sleep_for(behavior_.delay);
        if (index < behavior_.scripted_statuses.size()) {
            reply_error(res, behavior_.scripted_statuses[index], "scripted failure");
            return;
        }
        Decoded d;
        try {
            d = decode(req.body);
        } catch (const std::invalid_argument& e) {
            reply_error(res, 400, e.what());
            return;
        }
        if (behavior_.fixed_response) {
            res.set_content(*behavior_.fixed_response, "application/json");
            return;
        }
        try {
            const SeriesView view(d.series, d.freq);
            const models::ModelOutput out = model_->forecast(view, d.h, d.levels);
            json body;
            body["model"] = behavior_.alias;
            body["mean"] = wire_array(out.mean);
            if (model_->supports_quantiles() && !d.levels.empty() && !out.quantiles.empty()) {
                json q = json::object();
                const std::size_t L = d.levels.size();
                for (std::size_t l = 0; l < L; ++l) {
                    json col = json::array();
                    for (int k = 0; k < d.h; ++k) col.push_back(wire_round(out.quantiles[k * L + l]));
                    q[level_key(d.levels[l])] = std::move(col);
                }
                body["quantiles"] = std::move(q);
            }
            body["elapsed_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - started)
                                     .count();
            res.set_content(body.dump(), "application/json");
        } catch (const Error& e) {
            reply_error(res, 400, std::string(to_string(e.category())) + ": " + e.what());
        } catch (const std::exception& e) {
            reply_error(res, 500, e.what());
        }
    }

    StubBehavior behavior_;
    models::ForecasterPtr model_;
    std::string host_;
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<std::size_t> requests_{0};
};

}  // namespace

std::unique_ptr<StubServer> serve_stub(std::string_view bind, StubBehavior behavior) {
    const auto colon = bind.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
        throw Error(ErrorCategory::bind, "bind address must be host:port, got '" + std::string(bind) + "'");
    }
    const std::string host(bind.substr(0, colon));
    const std::string_view port_text = bind.substr(colon + 1);
    int port = -1;
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535) {
        throw Error(ErrorCategory::bind, "invalid port in bind address '" + std::string(bind) + "'");
    }
    return std::make_unique<HttplibStub>(host, port, std::move(behavior));
}

}  // namespace tsagent::adapters
