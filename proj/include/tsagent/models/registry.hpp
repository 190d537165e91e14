#pragma once

#include <span>
#include <string>
#include <string_view>

#include "tsagent/models/forecaster.hpp"

namespace tsagent::models {

/// Registry names of the native models, in a stable order.
std::span<const std::string_view> builtin_aliases();

bool is_builtin(std::string_view alias);

/// Returns the native model for `alias`; throws Error(invalid_argument) listing the registry otherwise.
ForecasterPtr make_builtin(std::string_view alias);

/// One-line modelling assumption for an alias (used in agent candidate notes).
std::string_view assumption_note(std::string_view alias);

}  // namespace tsagent::models
