#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "tsagent/core/csv.hpp"
#include "tsagent/core/panel.hpp"
#include "tsagent/core/time.hpp"

namespace fixtures {

inline std::filesystem::path data_path(const std::string& name) {
    return std::filesystem::path(TSAGENT_TEST_DATA_DIR) / name;
}

inline tsagent::SeriesPanel air_passengers() { return tsagent::parse_panel(data_path("air_passengers.csv")); }

inline tsagent::Timestamp ts(const std::string& text) { return *tsagent::parse_timestamp(text); }

/// Series on a regular grid starting at `start`.
inline tsagent::Series make_series(std::string id, std::vector<double> y, tsagent::Frequency freq,
                                   const std::string& start = "2000-01-01") {
    tsagent::Series s;
    s.id = std::move(id);
    const auto t0 = ts(start);
    for (std::size_t i = 0; i < y.size(); ++i) s.ds.push_back(tsagent::advance(t0, freq, static_cast<std::int64_t>(i)));
    s.y = std::move(y);
    return s;
}

inline tsagent::SeriesPanel single(std::vector<double> y, tsagent::Frequency freq, std::string id = "s") {
    std::vector<tsagent::Series> v;
    v.push_back(make_series(std::move(id), std::move(y), freq));
    return tsagent::SeriesPanel(std::move(v), freq);
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sd = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, sd);
    std::vector<double> y(n);
    for (auto& v : y) v = d(rng);
    return y;
}

inline std::vector<double> random_walk(std::size_t n, std::uint64_t seed) {
    auto e = white_noise(n, seed);
    for (std::size_t i = 1; i < n; ++i) e[i] += e[i - 1];
    return e;
}

/// ETS(A,N,N): l_t = l_{t-1} + alpha e_t, y_t = l_{t-1} + e_t.
inline std::vector<double> simulate_ann(std::size_t n, double alpha, std::uint64_t seed, double level0 = 10.0) {
    const auto e = white_noise(n, seed);
    std::vector<double> y(n);
    double level = level0;
    for (std::size_t t = 0; t < n; ++t) {
        y[t] = level + e[t];
        level += alpha * e[t];
    }
    return y;
}

/// Monthly synthetic series: level + slope*t + amplitude*sin(2 pi t / 12) + noise.
inline std::vector<double> seasonal_series(std::size_t n, double amplitude, double noise_sd, std::uint64_t seed,
                                           double level = 100.0, double slope = 0.0) {
    auto e = white_noise(n, seed, noise_sd);
    const double pi = std::acos(-1.0);
    for (std::size_t t = 0; t < n; ++t) {
        e[t] += level + slope * static_cast<double>(t) + amplitude * std::sin(2.0 * pi * static_cast<double>(t) / 12.0);
    }
    return e;
}

}  // namespace fixtures
