#include "tsagent/adapters/http.hpp"

#include <httplib.h>

#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <thread>

#include "tsagent/core/error.hpp"

namespace tsagent::adapters {

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

std::string Url::base() const { return origin() + path; }

Url parse_url(std::string_view text) {
    auto fail = [&](const std::string& why) {
        return Error(ErrorCategory::config, "malformed URL '" + std::string(text) + "': " + why);
    };
    Url url;
    const auto sep = text.find("://");
    if (sep == std::string_view::npos) throw fail("missing scheme");
    url.scheme = std::string(text.substr(0, sep));
    if (url.scheme != "http" && url.scheme != "https") throw fail("scheme must be http or https");
    std::string_view rest = text.substr(sep + 3);

    std::string_view query;
    if (const auto q = rest.find('?'); q != std::string_view::npos) {
        query = rest.substr(q + 1);
        rest = rest.substr(0, q);
    }
    std::string_view authority = rest;
    if (const auto slash = rest.find('/'); slash != std::string_view::npos) {
        authority = rest.substr(0, slash);
        url.path = std::string(rest.substr(slash));
        while (!url.path.empty() && url.path.back() == '/') url.path.pop_back();
    }
    if (authority.empty()) throw fail("missing host");
    if (const auto colon = authority.rfind(':'); colon != std::string_view::npos) {
        const std::string_view port = authority.substr(colon + 1);
        int value = 0;
        auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
        if (port.empty() || ec != std::errc{} || ptr != port.data() + port.size() || value < 1 || value > 65535) {
            throw fail("invalid port");
        }
        url.port = value;
        authority = authority.substr(0, colon);
    } else {
        url.port = url.scheme == "https" ? 443 : 80;
    }
    if (authority.empty()) throw fail("missing host");
    for (char c : authority) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')) {
            throw fail("invalid host character");
        }
    }
    url.host = std::string(authority);

    while (!query.empty()) {
        const auto amp = query.find('&');
        const std::string_view pair = query.substr(0, amp);
        const auto eq = pair.find('=');
        if (eq == std::string_view::npos || eq == 0) throw fail("query parameters must be key=value");
        url.query.emplace_back(std::string(pair.substr(0, eq)), std::string(pair.substr(eq + 1)));
        if (amp == std::string_view::npos) break;
        query = query.substr(amp + 1);
    }
    return url;
}

namespace {

class HttplibTransport final : public HttpTransport {
public:
    HttpResponse send(const HttpRequest& request) override {
        Url url;
        try {
            url = parse_url(request.url);
        } catch (const Error& e) {
            return {0, {}, e.what()};
        }
        httplib::Client client(url.origin());
        const auto secs = static_cast<time_t>(std::floor(request.timeout_seconds));
        const auto usecs = static_cast<time_t>((request.timeout_seconds - static_cast<double>(secs)) * 1e6);
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        httplib::Headers headers;
        for (const auto& [k, v] : request.headers) headers.emplace(k, v);

        std::string path = url.path.empty() ? "/" : url.path;
        httplib::Result result = request.method == "GET"
                                     ? client.Get(path, headers)
                                     : client.Post(path, headers, request.body, request.content_type);
        if (!result) return {0, {}, httplib::to_string(result.error())};
        return {result->status, result->body, {}};
    }
};

}  // namespace

std::shared_ptr<HttpTransport> default_transport() { return std::make_shared<HttplibTransport>(); }

HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request, const RetryPolicy& policy) {
    HttpResponse last;
    for (int attempt = 0; attempt <= policy.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto wait = std::chrono::milliseconds(static_cast<long long>(policy.backoff_base_ms) << (attempt - 1));
            std::this_thread::sleep_for(wait);
        }
        last = transport.send(request);
        const bool transport_failed = last.status == 0;
        const bool retryable = transport_failed || (policy.retry_status && policy.retry_status(last.status));
        if (!retryable) return last;
    }
    const int attempts = policy.max_retries + 1;
    if (last.status == 0) {
        throw Error(ErrorCategory::transport, request.url + ": " + last.transport_error + " after " +
                                                  std::to_string(attempts) + " attempt(s)");
    }
    throw Error(ErrorCategory::transport, request.url + ": HTTP " + std::to_string(last.status) + " after " +
                                              std::to_string(attempts) + " attempt(s)");
}

}  // namespace tsagent::adapters
