#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsagent {

/// Coarse failure classes. The CLI prints them as "error: <category>: <detail>".
enum class ErrorCategory {
    schema,
    parse,
    duplicate,
    frequency,
    insufficient_data,
    series_too_short,
    invalid_argument,
    alignment,
    model,
    transport,
    protocol,
    request,
    config,
    bind,
    usage,
};

std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& detail)
        : std::runtime_error(detail), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

}  // namespace tsagent
