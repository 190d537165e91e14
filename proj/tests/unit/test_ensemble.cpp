#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/ensemble/ensemble.hpp"
#include "tsagent/models/registry.hpp"

using namespace tsagent;
using namespace tsagent::ensemble;

namespace {

std::vector<double> unit(std::size_t n) { return std::vector<double>(n, 1.0); }

ForecastFrame frame(std::string model, std::vector<double> mean, std::vector<double> quantiles = {},
                    QuantileLevels levels = QuantileLevels::none(), std::string id = "s") {
    ForecastFrame f;
    f.model = std::move(model);
    f.levels = std::move(levels);
    SeriesForecast s;
    s.id = std::move(id);
    const auto t0 = fixtures::ts("2020-01-01");
    for (std::size_t k = 0; k < mean.size(); ++k) s.ds.push_back(advance(t0, Frequency::of(FrequencyUnit::monthly), k));
    s.mean = std::move(mean);
    s.quantiles = std::move(quantiles);
    f.series.push_back(std::move(s));
    return f;
}

}  // namespace

TEST_CASE("median") {
    CHECK(median({1, 3, 100}) == 3.0);
    CHECK(median({2, 4}) == 3.0);
    CHECK(median({5}) == 5.0);
    CHECK_THROWS_AS(median({}), Error);
}

TEST_CASE("pava examples") {
    CHECK(pava_isotonic(std::vector{3.0, 1.0, 2.0}, unit(3)) == std::vector{2.0, 2.0, 2.0});
    CHECK(pava_isotonic(std::vector{1.0, 2.0, 3.0}, unit(3)) == std::vector{1.0, 2.0, 3.0});
    CHECK(pava_isotonic(std::vector{2.0, 1.0}, unit(2)) == std::vector{1.5, 1.5});
    CHECK(pava_isotonic(std::vector{10.0, 8.0, 12.0}, unit(3)) == std::vector{9.0, 9.0, 12.0});
    // weighted pool: (3*1 + 1*3) / 4
    const auto w = pava_isotonic(std::vector{3.0, 1.0}, std::vector{1.0, 3.0});
    CHECK(w[0] == doctest::Approx(1.5));
    CHECK(w[1] == doctest::Approx(1.5));
}

TEST_CASE("pava errors") {
    CHECK_THROWS_AS(pava_isotonic(std::vector{1.0, 2.0}, std::vector{1.0, 0.0}), Error);
    CHECK_THROWS_AS(pava_isotonic(std::vector{1.0, 2.0}, std::vector{1.0, -1.0}), Error);
    CHECK_THROWS_AS(pava_isotonic(std::vector{1.0, 2.0}, std::vector{1.0}), Error);
    CHECK_THROWS_AS(pava_isotonic(std::vector<double>{}, std::vector<double>{}), Error);
}

TEST_CASE("pava matches brute force and keeps the weighted mean") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> len(1, 10);
    std::normal_distribution<double> val(0.0, 3.0);
    std::uniform_real_distribution<double> wt(0.1, 5.0);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::size_t>(len(rng));
        std::vector<double> y(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = trial % 3 == 0 ? std::round(val(rng)) : val(rng);  // ties exercised by rounding
            w[i] = trial % 2 == 0 ? 1.0 : wt(rng);
        }
        const auto fit = pava_isotonic(y, w);
        const auto ref = oracles::isotonic_brute_force(y, w);
        REQUIRE(fit.size() == n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(fit[i] - ref[i]) <= 1e-9);
        CHECK(std::is_sorted(fit.begin(), fit.end()));
        double a = 0.0, b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            a += w[i] * fit[i];
            b += w[i] * y[i];
        }
        CHECK(std::fabs(a - b) <= 1e-9);
        CHECK((fit == y) == std::is_sorted(y.begin(), y.end()));
    }
}

TEST_CASE("monotonize_quantiles") {
    const QuantileLevels lv{0.1, 0.5, 0.9};
    auto f = frame("m", {10, 20}, {10, 8, 12, 1, 1, 1}, lv);
    const auto g = monotonize_quantiles(f);
    CHECK(g.series[0].quantiles == std::vector<double>{9, 9, 12, 1, 1, 1});
    CHECK(g.series[0].mean == f.series[0].mean);
    const auto gg = monotonize_quantiles(g);
    CHECK(gg.series[0].quantiles == g.series[0].quantiles);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> d(0.0, 1.0);
    const QuantileLevels dec;
    for (int i = 0; i < 50; ++i) {
        std::vector<double> q(4 * 9), m(4);
        for (auto& v : q) v = d(rng);
        auto once = monotonize_quantiles(frame("r", m, q, dec));
        for (std::size_t k = 0; k < 4; ++k) {
            const auto row = once.series[0].quantile_row(k, 9);
            CHECK(std::is_sorted(row.begin(), row.end()));
        }
        CHECK(monotonize_quantiles(once).series[0].quantiles == once.series[0].quantiles);
    }
}

TEST_CASE("median_ensemble points and quantiles") {
    const QuantileLevels lv{0.1, 0.9};
    std::vector<ForecastFrame> frames{frame("a", {1, 2}, {0, 2, 1, 3}, lv), frame("b", {3, 4}, {2, 4, 3, 5}, lv),
                                      frame("c", {100, 6}, {99, 101, 5, 7}, lv)};
    const auto e = median_ensemble(frames, lv);
    CHECK(e.model == "median_ensemble[a,b,c]");
    CHECK(e.series[0].mean == std::vector{3.0, 4.0});
    CHECK(e.series[0].quantiles == std::vector{2.0, 4.0, 3.0, 5.0});

    SUBCASE("even count") {
        const auto two = median_ensemble({frames[0], frames[1]}, lv);
        CHECK(two.series[0].mean == std::vector{2.0, 3.0});
    }
    SUBCASE("identity") {
        const auto same = median_ensemble({frames[1], frames[1], frames[1]}, lv);
        CHECK(same.series[0].mean == frames[1].series[0].mean);
        CHECK(same.series[0].quantiles == frames[1].series[0].quantiles);
    }
    SUBCASE("permutation invariance") {
        const auto p = median_ensemble({frames[2], frames[0], frames[1]}, lv);
        CHECK(p.series[0].mean == e.series[0].mean);
        CHECK(p.series[0].quantiles == e.series[0].quantiles);
    }
    SUBCASE("point-only member") {
        auto pts = frame("p", {50, 50});
        const auto mixed = median_ensemble({frames[0], frames[1], pts}, lv);
        CHECK(mixed.series[0].mean == std::vector{3.0, 4.0});
        CHECK(mixed.series[0].quantiles == std::vector{1.0, 3.0, 2.0, 4.0});
        CHECK_THROWS_AS(median_ensemble({pts, pts}, lv), Error);
        CHECK(median_ensemble({pts, pts}, QuantileLevels::none()).series[0].mean == std::vector{50.0, 50.0});
    }
}

TEST_CASE("median_ensemble alignment errors") {
    const auto a = frame("a", {1, 2});
    auto check_alignment = [](const std::vector<ForecastFrame>& fs) {
        try {
            median_ensemble(fs, QuantileLevels::none());
            FAIL("expected alignment error");
        } catch (const Error& e) {
            CHECK(e.category() == ErrorCategory::alignment);
        }
    };
    check_alignment({a, frame("b", {1, 2}, {}, QuantileLevels::none(), "other")});
    auto shifted = a;
    shifted.series[0].ds[1] += std::chrono::hours(1);
    shifted.model = "b";
    check_alignment({a, shifted});
    check_alignment({a, frame("b", {1, 2, 3})});
    CHECK_THROWS_AS(median_ensemble({}, QuantileLevels::none()), Error);
}

TEST_CASE("MedianEnsemble forecaster stays inside the member envelope") {
    const auto panel = fixtures::air_passengers();
    std::vector<models::ForecasterPtr> members;
    for (auto alias : {"seasonalnaive", "theta", "autoets"}) members.push_back(models::make_builtin(alias));
    const MedianEnsemble ens(members);
    CHECK(ens.name() == "median_ensemble[seasonalnaive,theta,autoets]");
    CHECK(ens.supports_quantiles());
    const QuantileLevels dec;
    const auto view = panel.view(0);
    const auto out = ens.forecast(view, 12, dec);
    std::vector<models::ModelOutput> outs;
    for (const auto& m : members) outs.push_back(m->forecast(view, 12, dec));
    for (std::size_t k = 0; k < 12; ++k) {
        double lo = 1e300, hi = -1e300;
        for (const auto& o : outs) {
            lo = std::min(lo, o.mean[k]);
            hi = std::max(hi, o.mean[k]);
        }
        CHECK(out.mean[k] >= lo);
        CHECK(out.mean[k] <= hi);
        const auto row = std::span<const double>(out.quantiles).subspan(k * 9, 9);
        CHECK(std::is_sorted(row.begin(), row.end()));
    }
}
