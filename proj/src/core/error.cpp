#include "tsagent/core/error.hpp"

namespace tsagent {

std::string_view to_string(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::schema: return "schema";
        case ErrorCategory::parse: return "parse";
        case ErrorCategory::duplicate: return "duplicate";
        case ErrorCategory::frequency: return "frequency";
        case ErrorCategory::insufficient_data: return "insufficient-data";
        case ErrorCategory::series_too_short: return "series-too-short";
        case ErrorCategory::invalid_argument: return "invalid-argument";
        case ErrorCategory::alignment: return "alignment";
        case ErrorCategory::model: return "model";
        case ErrorCategory::transport: return "transport";
        case ErrorCategory::protocol: return "protocol";
        case ErrorCategory::request: return "request";
        case ErrorCategory::config: return "config";
        case ErrorCategory::bind: return "bind";
        case ErrorCategory::usage: return "usage";
    }
    return "unknown";
}

}  // namespace tsagent
