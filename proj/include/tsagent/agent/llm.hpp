#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tsagent/adapters/http.hpp"

namespace tsagent::agent {

/// Provider-neutral chat model configuration, e.g. "openai:gpt-4o".
struct LLMConfig {
    std::string provider;
    std::string model;
    std::string endpoint;        ///< base URL; "/chat/completions" is appended
    std::string credential_env;  ///< environment variable holding the bearer token
    double temperature = 0.0;
    double timeout_seconds = 60.0;
    int max_retries = 2;
    int backoff_ms = 500;

    std::string spec() const { return provider + ":" + model; }

    /// Parses "provider:model". "openai" gets its public endpoint and OPENAI_API_KEY;
    /// other providers need both `endpoint` and `credential_env`. Throws Error(config).
    static LLMConfig parse(std::string_view spec, std::optional<std::string> endpoint = std::nullopt,
                           std::optional<std::string> credential_env = std::nullopt);
};

enum class Role { system, user, assistant, tool };
std::string_view to_string(Role role);

struct ChatMessage {
    Role role = Role::user;
    std::string content;
};

/// A function the model may call; `parameters` is a JSON Schema object.
struct ToolSchema {
    std::string name;
    std::string description;
    nlohmann::json parameters;
};

struct ToolCall {
    std::string name;
    nlohmann::json arguments;  ///< object
};

struct ChatExchange {
    std::vector<ChatMessage> messages;
    std::vector<ToolSchema> tools;
};

struct AssistantMessage {
    std::string text;
    std::optional<ToolCall> tool_call;
};

/// Builds the chat-completions request body.
std::string encode_chat_request(const LLMConfig& config, const ChatExchange& exchange);

/// Parses the first choice of a chat-completions response. Throws Error(protocol) on malformed
/// payloads, tool calls to undeclared tools, or unparseable tool arguments.
AssistantMessage decode_chat_response(std::string_view body, const ChatExchange& exchange);

/// One chat-completions round trip. Retries 429 and 5xx with exponential backoff.
/// Errors: missing credential -> config; other 4xx -> request; retries exhausted -> transport.
AssistantMessage llm_chat(const LLMConfig& config, const ChatExchange& exchange, adapters::HttpTransport& transport);

}  // namespace tsagent::agent
