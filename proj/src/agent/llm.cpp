#include "tsagent/agent/llm.hpp"

#include <cstdlib>

#include "tsagent/core/error.hpp"

namespace tsagent::agent {

using nlohmann::json;

LLMConfig LLMConfig::parse(std::string_view spec, std::optional<std::string> endpoint,
                           std::optional<std::string> credential_env) {
    const auto colon = spec.find(':');
    if (colon == std::string_view::npos || spec.find(':', colon + 1) != std::string_view::npos) {
        throw Error(ErrorCategory::config, "LLM spec must look like provider:model, got '" + std::string(spec) + "'");
    }
    LLMConfig config;
    config.provider = std::string(spec.substr(0, colon));
    config.model = std::string(spec.substr(colon + 1));
    if (config.provider.empty() || config.model.empty()) {
        throw Error(ErrorCategory::config, "LLM spec must look like provider:model, got '" + std::string(spec) + "'");
    }
    if (config.provider == "openai") {
        config.endpoint = "https://api.openai.com/v1";
        config.credential_env = "OPENAI_API_KEY";
    }
    if (endpoint) config.endpoint = *endpoint;
    if (credential_env) config.credential_env = *credential_env;
    while (!config.endpoint.empty() && config.endpoint.back() == '/') config.endpoint.pop_back();
    if (config.endpoint.empty()) {
        throw Error(ErrorCategory::config, "provider '" + config.provider + "' requires an explicit endpoint");
    }
    if (config.credential_env.empty()) {
        throw Error(ErrorCategory::config,
                    "provider '" + config.provider + "' requires a credential environment variable name");
    }
    adapters::parse_url(config.endpoint);
    return config;
}

std::string_view to_string(Role role) {
    switch (role) {
        case Role::system: return "system";
        case Role::user: return "user";
        case Role::assistant: return "assistant";
        case Role::tool: return "tool";
    }
    return "user";
}

std::string encode_chat_request(const LLMConfig& config, const ChatExchange& exchange) {
    json body;
    body["model"] = config.model;
    body["temperature"] = config.temperature;
    json messages = json::array();
    for (const auto& m : exchange.messages) messages.push_back({{"role", to_string(m.role)}, {"content", m.content}});
    body["messages"] = std::move(messages);
    if (!exchange.tools.empty()) {
        json tools = json::array();
        for (const auto& t : exchange.tools) {
            tools.push_back({{"type", "function"},
                             {"function", {{"name", t.name}, {"description", t.description}, {"parameters", t.parameters}}}});
        }
        body["tools"] = std::move(tools);
    }
    return body.dump();
}

AssistantMessage decode_chat_response(std::string_view body, const ChatExchange& exchange) {
    const json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCategory::protocol, "chat response is not a JSON object");
    if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
        throw Error(ErrorCategory::protocol, "chat response has no choices");
    }
    const json& message = j["choices"][0].value("message", json::object());
    if (!message.is_object()) throw Error(ErrorCategory::protocol, "chat response choice has no message");

    AssistantMessage out;
    if (message.contains("content") && message["content"].is_string()) out.text = message["content"].get<std::string>();
    if (message.contains("tool_calls") && message["tool_calls"].is_array() && !message["tool_calls"].empty()) {
        const json& call = message["tool_calls"][0];
        if (!call.is_object() || !call.contains("function") || !call["function"].is_object()) {
            throw Error(ErrorCategory::protocol, "malformed tool call");
        }
        const json& fn = call["function"];
        if (!fn.contains("name") || !fn["name"].is_string()) throw Error(ErrorCategory::protocol, "tool call without a name");
        ToolCall tc;
        tc.name = fn["name"].get<std::string>();
        bool declared = false;
        for (const auto& t : exchange.tools) declared = declared || t.name == tc.name;
        if (!declared) throw Error(ErrorCategory::protocol, "call to undeclared tool '" + tc.name + "'");
        const json& args = fn.value("arguments", json("{}"));
        if (args.is_string()) {
            tc.arguments = json::parse(args.get<std::string>(), nullptr, false);
        } else {
            tc.arguments = args;
        }
        if (tc.arguments.is_discarded() || !tc.arguments.is_object()) {
            throw Error(ErrorCategory::protocol, "unparseable arguments for tool '" + tc.name + "'");
        }
        out.tool_call = std::move(tc);
    }
    return out;
}

AssistantMessage llm_chat(const LLMConfig& config, const ChatExchange& exchange, adapters::HttpTransport& transport) {
    const char* credential = std::getenv(config.credential_env.c_str());
    if (credential == nullptr || *credential == '\0') {
        throw Error(ErrorCategory::config, "environment variable " + config.credential_env + " is not set");
    }
    adapters::HttpRequest request;
    request.method = "POST";
    request.url = config.endpoint + "/chat/completions";
    request.headers.emplace_back("Authorization", std::string("Bearer ") + credential);
    request.body = encode_chat_request(config, exchange);
    request.timeout_seconds = config.timeout_seconds;

    adapters::RetryPolicy policy;
    policy.max_retries = config.max_retries;
    policy.backoff_base_ms = config.backoff_ms;
    policy.retry_status = [](int status) { return status == 429 || status >= 500; };
    const adapters::HttpResponse response = adapters::send_with_retry(transport, request, policy);
    if (response.status >= 400) {
        std::string message = response.body.substr(0, 300);
        const json j = json::parse(response.body, nullptr, false);
        if (j.is_object() && j.contains("error")) {
            const json& e = j["error"];
            if (e.is_string()) message = e.get<std::string>();
            if (e.is_object() && e.contains("message") && e["message"].is_string()) message = e["message"].get<std::string>();
        }
        throw Error(ErrorCategory::request, "chat request rejected (HTTP " + std::to_string(response.status) + "): " + message);
    }
    return decode_chat_response(response.body, exchange);
}

}  // namespace tsagent::agent
