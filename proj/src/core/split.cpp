#include "tsagent/core/split.hpp"

#include "tsagent/core/error.hpp"

namespace tsagent {

std::pair<SeriesPanel, SeriesPanel> train_test_split(const SeriesPanel& panel, int h) {
    if (h < 1) throw Error(ErrorCategory::invalid_argument, "horizon must be >= 1");
    std::vector<Series> train, test;
    for (const Series& s : panel.series()) {
        if (s.size() <= static_cast<std::size_t>(h)) {
            throw Error(ErrorCategory::series_too_short, "series '" + s.id + "' has " + std::to_string(s.size()) +
                                                             " observations, needs more than h=" + std::to_string(h));
        }
        const auto cut = static_cast<std::ptrdiff_t>(s.size()) - h;
        train.push_back({s.id, {s.ds.begin(), s.ds.begin() + cut}, {s.y.begin(), s.y.begin() + cut}});
        test.push_back({s.id, {s.ds.begin() + cut, s.ds.end()}, {s.y.begin() + cut, s.y.end()}});
    }
    return {SeriesPanel(std::move(train), panel.frequency()), SeriesPanel(std::move(test), panel.frequency())};
}

}  // namespace tsagent
