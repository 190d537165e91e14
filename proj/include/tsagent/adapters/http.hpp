#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace tsagent::adapters {

struct Url {
    std::string scheme;  ///< "http" or "https"
    std::string host;
    int port = 0;
    std::string path;  ///< without trailing '/', may be empty
    std::vector<std::pair<std::string, std::string>> query;

    /// "scheme://host:port"
    std::string origin() const;
    /// origin + path
    std::string base() const;
};

/// Parses absolute http(s) URLs; throws Error(config) on malformed input.
Url parse_url(std::string_view text);

struct HttpRequest {
    std::string method = "POST";
    std::string url;  ///< absolute
    std::vector<std::pair<std::string, std::string>> headers;
    std::string body;
    std::string content_type = "application/json";
    double timeout_seconds = 30.0;
};

struct HttpResponse {
    int status = 0;  ///< 0 when the request never completed
    std::string body;
    std::string transport_error;  ///< non-empty for connection failures and timeouts
};

/// Seam between protocol code and the network so tests can script or count traffic.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse send(const HttpRequest& request) = 0;
};

/// cpp-httplib backed transport.
std::shared_ptr<HttpTransport> default_transport();

/// Wraps another transport and counts requests.
class CountingTransport final : public HttpTransport {
public:
    explicit CountingTransport(std::shared_ptr<HttpTransport> inner) : inner_(std::move(inner)) {}
    HttpResponse send(const HttpRequest& request) override {
        ++count_;
        return inner_->send(request);
    }
    std::size_t count() const { return count_.load(); }

private:
    std::shared_ptr<HttpTransport> inner_;
    std::atomic<std::size_t> count_{0};
};

/// Transport answering from a callback; never touches the network.
class ScriptedTransport final : public HttpTransport {
public:
    using Handler = std::function<HttpResponse(const HttpRequest&)>;
    explicit ScriptedTransport(Handler handler) : handler_(std::move(handler)) {}
    HttpResponse send(const HttpRequest& request) override {
        ++count_;
        return handler_(request);
    }
    std::size_t count() const { return count_.load(); }

private:
    Handler handler_;
    std::atomic<std::size_t> count_{0};
};

struct RetryPolicy {
    int max_retries = 2;
    int backoff_base_ms = 100;  ///< wait backoff_base_ms * 2^attempt between attempts
    std::function<bool(int status)> retry_status;
};

/// Sends with retries on transport failures and retryable statuses. Returns the final
/// response (which may still carry an error status); throws Error(transport) when every
/// attempt failed at the transport level or with a retryable status.
HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request, const RetryPolicy& policy);

}  // namespace tsagent::adapters
