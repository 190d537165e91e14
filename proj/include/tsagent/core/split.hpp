#pragma once

#include <utility>

#include "tsagent/core/panel.hpp"

namespace tsagent {

/// Holds out the final h observations of every series. Every series must be longer than h.
std::pair<SeriesPanel, SeriesPanel> train_test_split(const SeriesPanel& panel, int h);

}  // namespace tsagent
