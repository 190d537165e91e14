#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/core/split.hpp"
#include "tsagent/evaluation/metrics.hpp"
#include "tsagent/models/arima.hpp"
#include "tsagent/models/baselines.hpp"
#include "tsagent/models/ets.hpp"
#include "tsagent/models/registry.hpp"

using namespace tsagent;
using namespace tsagent::models;

namespace {

const QuantileLevels kDeciles;

std::vector<double> shifted(std::vector<double> y, double c) {
    for (auto& v : y) v += c;
    return y;
}

std::vector<double> scaled(std::vector<double> y, double c) {
    for (auto& v : y) v *= c;
    return y;
}

}  // namespace

TEST_CASE("naive") {
    CHECK(naive(std::vector{5.0, 7.0}, 3, QuantileLevels::none()).mean == std::vector{7.0, 7.0, 7.0});
    const auto c = naive(std::vector(10, 4.0), 3, kDeciles);
    for (double q : c.quantiles) CHECK(q == 4.0);
    const auto med = naive(std::vector{0.0, 2.0, 0.0, 2.0}, 1, QuantileLevels{0.5});
    CHECK(med.quantiles == std::vector{2.0});
    CHECK_THROWS_AS(naive(std::vector<double>{}, 1, kDeciles), Error);

    // sigma = RMS of differences (2,-2,2) = 2; q90 at step 4 = 2 + 1.2815515655 * 2 * 2
    const auto g = naive(std::vector{0.0, 2.0, 0.0, 2.0}, 4, QuantileLevels{0.9});
    CHECK(g.quantiles[3] == doctest::Approx(2.0 + 1.2815515655446004 * 4.0).epsilon(1e-12));
}

TEST_CASE("seasonal_naive") {
    const std::vector<double> y{1, 2, 3, 4, 1, 2, 3, 4};
    CHECK(seasonal_naive(y, 4, 4, QuantileLevels::none()).mean == std::vector{1.0, 2.0, 3.0, 4.0});
    CHECK(seasonal_naive(y, 4, 6, QuantileLevels::none()).mean == std::vector{1.0, 2.0, 3.0, 4.0, 1.0, 2.0});
    CHECK(seasonal_naive(std::vector{5.0, 7.0}, 1, 2, kDeciles).mean ==
          naive(std::vector{5.0, 7.0}, 2, kDeciles).mean);
    try {
        seasonal_naive(std::vector{1.0, 2.0}, 4, 1, kDeciles);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::series_too_short);
    }
}

TEST_CASE("historic_average") {
    CHECK(historic_average(std::vector{2.0, 4.0}, 2, QuantileLevels::none()).mean == std::vector{3.0, 3.0});
    CHECK(historic_average(std::vector{5.0}, 1, QuantileLevels::none()).mean == std::vector{5.0});
    CHECK(historic_average(std::vector{1.0, 1.0, 1.0, 7.0}, 1, QuantileLevels::none()).mean == std::vector{2.5});
    // no horizon growth
    const auto out = historic_average(std::vector{1.0, 3.0, 2.0, 6.0}, 3, QuantileLevels{0.9});
    CHECK(out.quantiles[0] == out.quantiles[2]);
}

TEST_CASE("ses") {
    const auto a1 = ses(std::vector{3.0, 9.0, 4.0}, 1.0);
    CHECK(a1.state.level == 4.0);
    CHECK(ses(std::vector{2.0, 4.0}, 0.5).state.level == 3.0);
    CHECK(ses(std::vector(10, 6.5)).state.level == 6.5);
    CHECK(ses_forecast(std::vector(10, 6.5), 3, kDeciles).mean == std::vector{6.5, 6.5, 6.5});
    // grid search returns one of the grid values and no other grid value does better
    const auto y = fixtures::simulate_ann(200, 0.4, 11);
    const auto best = ses(y);
    const double a = best.state.alpha;
    CHECK(std::abs(a * 100.0 - std::round(a * 100.0)) < 1e-9);
    auto sse = [&](double alpha) {
        const auto f = ses(y, alpha);
        double s = 0;
        for (std::size_t t = 1; t < y.size(); ++t) s += (y[t] - f.fitted[t]) * (y[t] - f.fitted[t]);
        return s;
    };
    const double s_best = sse(a);
    for (int i = 1; i <= 99; ++i) CHECK(s_best <= sse(i / 100.0) + 1e-9);
}

TEST_CASE("theta") {
    CHECK(theta(std::vector(20, 5.0), 1, 3, kDeciles).mean == std::vector{5.0, 5.0, 5.0});
    std::vector<double> y(10);
    for (std::size_t t = 0; t < y.size(); ++t) y[t] = 2.0 * static_cast<double>(t + 1);
    const auto out = theta(y, 1, 2, kDeciles);
    CHECK(out.mean[0] >= 20.0);
    CHECK(out.mean[1] > out.mean[0]);
    CHECK_THROWS_AS(theta(std::vector{1.0, 2.0, 3.0}, 1, 1, kDeciles), Error);

    // nonpositive values disable the multiplicative seasonal path instead of dividing by zero
    auto s = fixtures::seasonal_series(72, 10.0, 0.5, 3, 0.0);
    const auto fit = theta_fit(s, 12, 12, kDeciles);
    CHECK_FALSE(fit.seasonal_adjusted);
    for (double v : fit.output.mean) CHECK(std::isfinite(v));
}

TEST_CASE("theta beats naive on AirPassengers") {
    const auto panel = fixtures::air_passengers();
    const auto [train, test] = train_test_split(panel, 12);
    const auto& tr = train[0].y;
    const auto& te = test[0].y;
    const auto th = theta(tr, 12, 12, kDeciles);
    const auto nv = naive(tr, 12, kDeciles);
    const double mase_theta = *evaluation::mase(te, th.mean, tr, 12);
    const double mase_naive = *evaluation::mase(te, nv.mean, tr, 12);
    CHECK(theta_fit(tr, 12, 12, kDeciles).seasonal_adjusted);
    CHECK(mase_theta < mase_naive);
}

TEST_CASE("croston") {
    const auto c = croston(std::vector<double>{0, 0, 3, 0, 0, 3, 0, 0, 3}, 4, CrostonVariant::classic);
    for (double v : c.mean) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.quantiles.empty());
    for (auto variant : {CrostonVariant::classic, CrostonVariant::adida}) {
        for (double v : croston(std::vector<double>(12, 0.0), 3, variant).mean) CHECK(v == 0.0);
    }
    // no zeros: classic equals SES with alpha 0.1
    const std::vector<double> y{4, 6, 5, 7, 3};
    const auto r = croston(y, 2, CrostonVariant::classic);
    CHECK(r.mean[0] == doctest::Approx(ses(y, 0.1).state.level).epsilon(1e-12));
    CHECK(demand_intervals(std::vector<double>{0, 0, 3, 0, 1}) == std::vector{3.0, 2.0});

    // ADIDA: intervals all 3 -> buckets of 3 summing to 3 -> per-period rate 1
    const auto a = croston(std::vector<double>{0, 0, 3, 0, 0, 3, 0, 0, 3}, 2, CrostonVariant::adida);
    for (double v : a.mean) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ETS: recursion, constant series and selection table") {
    EtsParams p;
    p.alpha = 0.5;
    p.level0 = 2.0;
    // errors: 2 - 2 = 0, then level stays 2, 4 - 2 = 2
    CHECK(ets_sse(std::vector{2.0, 4.0}, p) == doctest::Approx(4.0));

    const auto c = auto_ets(std::vector(30, 8.0), 12, 4, kDeciles);
    CHECK(c.params.trend == EtsTrend::none);
    CHECK(c.params.season == EtsSeason::none);
    for (double v : c.output.mean) CHECK(v == doctest::Approx(8.0));

    const auto fit = auto_ets(fixtures::air_passengers()[0].y, 12, 12, kDeciles);
    for (const auto& cand : fit.candidates) {
        if (cand.fitted) CHECK(fit.params.aicc <= cand.aicc + 1e-9);
    }
    CHECK(fit.params.beta <= fit.params.alpha + 1e-12);
    CHECK(fit.params.gamma <= 1.0 - fit.params.alpha + 1e-12);
    double s0 = 0;
    for (double v : fit.params.season0) s0 += v;
    CHECK(std::abs(s0) < 1e-9);
    CHECK_THROWS_AS(auto_ets(std::vector{1.0, 2.0, 3.0}, 1, 2, kDeciles), Error);
}

TEST_CASE("ETS: deterministic simulation quantiles") {
    const auto y = fixtures::simulate_ann(120, 0.3, 5);
    const auto a = auto_ets(y, 1, 6, kDeciles);
    const auto b = auto_ets(y, 1, 6, kDeciles);
    CHECK(a.output.quantiles == b.output.quantiles);
    const auto other = auto_ets(y, 1, 6, kDeciles, 99);
    CHECK(other.output.mean == a.output.mean);
}

TEST_CASE("ETS: seasonal form chosen for strongly seasonal data") {
    int seasonal = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto y = fixtures::seasonal_series(72, 20.0, 1.0, seed);
        seasonal += auto_ets(y, 12, 12, QuantileLevels::none()).params.season == EtsSeason::additive ? 1 : 0;
    }
    CHECK(seasonal >= 95);
}

TEST_CASE("ARIMA: AR(1) CSS matches the least-squares oracle") {
    // CSS for AR(1) with a mean is OLS of y_t on (1, y_{t-1}).
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto e = fixtures::white_noise(300, seed);
        std::vector<double> y(300);
        y[0] = 5.0 + e[0];
        for (std::size_t t = 1; t < y.size(); ++t) y[t] = 5.0 + 0.6 * (y[t - 1] - 5.0) + e[t];
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(y.size() - 1);
        for (std::size_t t = 1; t < y.size(); ++t) {
            sx += y[t - 1];
            sy += y[t];
            sxx += y[t - 1] * y[t - 1];
            sxy += y[t - 1] * y[t];
        }
        const double phi = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double c = (sy - phi * sx) / n;
        const auto order = fit_arima(y, 1, 0, 0, 0, 0, 0, 1, true);
        REQUIRE(order.ar.size() == 1);
        CHECK(order.ar[0] == doctest::Approx(phi).epsilon(1e-4));
        CHECK(order.mean == doctest::Approx(c / (1.0 - phi)).epsilon(1e-4));
    }
}

TEST_CASE("ARIMA: random-walk variance grows linearly") {
    const auto y = fixtures::random_walk(100, 4);
    ArimaOrder o;
    o.d = 1;
    o.sigma2 = 2.0;
    std::vector<double> mean, sd;
    arima_forecast(y, o, 5, mean, sd);
    for (int k = 1; k <= 5; ++k) {
        CHECK(mean[static_cast<std::size_t>(k - 1)] == doctest::Approx(y.back()));
        CHECK(sd[static_cast<std::size_t>(k - 1)] == doctest::Approx(std::sqrt(2.0 * k)));
    }
}

TEST_CASE("ARIMA: unit-circle check") {
    CHECK(roots_outside_unit_circle(std::vector{0.5}));
    CHECK_FALSE(roots_outside_unit_circle(std::vector{1.2}));
    CHECK(roots_outside_unit_circle(std::vector{0.5, 0.3}));
    CHECK_FALSE(roots_outside_unit_circle(std::vector{0.5, 0.6}));
    CHECK(roots_outside_unit_circle(std::vector<double>{}));
}

TEST_CASE("ARIMA: white noise, constant series, selection table") {
    const auto y = fixtures::white_noise(300, 17, 2.0);
    const auto fit = auto_arima(y, 1, 5, kDeciles);
    CHECK(fit.order.d == 0);
    const auto base = fit_arima(y, 0, 0, 0, 0, 0, 0, 1, true);
    CHECK(fit.order.aicc <= base.aicc + 1e-9);
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    // forecast standard error recovered from the Gaussian q90: (q90 - mean) / z_0.9
    const std::size_t L = kDeciles.size();
    for (std::size_t k = 0; k < fit.output.mean.size(); ++k) {
        const double se = (fit.output.quantiles[k * L + 8] - fit.output.mean[k]) / 1.2815515655446004;
        CHECK(std::abs(fit.output.mean[k] - mean) <= 3.0 * se);
    }
    for (const auto& c : fit.candidates) {
        if (c.valid) CHECK(fit.order.aicc <= c.aicc + 1e-9);
    }

    const auto constant = auto_arima(std::vector(40, 3.0), 1, 4, kDeciles);
    for (double v : constant.output.mean) CHECK(v == doctest::Approx(3.0));
    CHECK_THROWS_AS(auto_arima(std::vector(19, 1.0), 1, 2, kDeciles), Error);
}

TEST_CASE("ARIMA: random walk selects d = 1") {
    int d1 = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) d1 += kpss_differences(fixtures::random_walk(300, seed)) == 1 ? 1 : 0;
    CHECK(d1 >= 90);
}

TEST_CASE("registry") {
    CHECK(builtin_aliases().size() == 9);
    for (auto alias : builtin_aliases()) {
        CHECK(is_builtin(alias));
        CHECK(make_builtin(alias)->name() == alias);
        CHECK_FALSE(assumption_note(alias).empty());
    }
    CHECK_FALSE(make_builtin("croston")->supports_quantiles());
    CHECK_FALSE(make_builtin("adida")->supports_quantiles());
    try {
        make_builtin("prophet");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.category() == ErrorCategory::invalid_argument);
        CHECK(std::string(e.what()).find("seasonalnaive") != std::string::npos);
    }
}

TEST_CASE("fallback to naive is flagged") {
    const auto m = Frequency::of(FrequencyUnit::monthly);
    const auto panel = fixtures::single({1, 2, 3, 4, 5}, m);
    const auto frame = forecast_panel(*make_builtin("autoarima"), panel, 3, kDeciles);
    CHECK(frame.series[0].mean == std::vector{5.0, 5.0, 5.0});
    CHECK_FALSE(frame.warnings.empty());
}

TEST_CASE("contract: shapes, timestamps, equivariance, symmetry") {
    const auto panel = fixtures::air_passengers();
    const auto y = panel[0].y;
    const SeriesView view = panel.view(0);
    for (auto alias : builtin_aliases()) {
        CAPTURE(alias);
        const auto model = make_builtin(alias);
        const auto frame = forecast_panel(*model, panel, 7, kDeciles);
        const auto& s = frame.series[0];
        CHECK(s.mean.size() == 7);
        CHECK(s.ds == future_grid(panel[0].ds.back(), panel.frequency(), 7));
        if (model->supports_quantiles()) CHECK(s.quantiles.size() == 7 * kDeciles.size());
    }

    // theta is checked separately: its multiplicative seasonal path is not shift-equivariant.
    const std::vector<std::string> shift_models{"naive", "seasonalnaive", "historicaverage", "ses", "autoets"};
    auto run = [&](const std::string& alias, const std::vector<double>& values) {
        const SeriesView v(view.id, view.ds, values, view.freq);
        return make_builtin(alias)->forecast(v, 12, kDeciles);
    };
    const auto shifted_y = shifted(y, 1000.0);
    for (const auto& alias : shift_models) {
        CAPTURE(alias);
        const auto base = run(alias, y);
        const auto moved = run(alias, shifted_y);
        for (std::size_t k = 0; k < 12; ++k) CHECK(moved.mean[k] == doctest::Approx(base.mean[k] + 1000.0).epsilon(1e-9));
    }
    {
        // non-seasonal theta path (m = 1) is shift-equivariant
        const auto z = fixtures::simulate_ann(80, 0.4, 21, 50.0);
        const auto base = theta(z, 1, 6, kDeciles);
        const auto moved = theta(shifted(z, 1000.0), 1, 6, kDeciles);
        for (std::size_t k = 0; k < 6; ++k) CHECK(moved.mean[k] == doctest::Approx(base.mean[k] + 1000.0).epsilon(1e-9));
    }
    for (const std::string alias : {"naive", "seasonalnaive", "historicaverage"}) {
        const auto base = run(alias, y);
        const auto big = run(alias, scaled(y, 3.5));
        for (std::size_t k = 0; k < 12; ++k) CHECK(big.mean[k] == doctest::Approx(3.5 * base.mean[k]).epsilon(1e-12));
    }
    for (const std::string alias : {"naive", "seasonalnaive", "historicaverage", "ses", "theta", "autoarima"}) {
        CAPTURE(alias);
        const auto out = run(alias, y);
        const std::size_t L = kDeciles.size();
        for (std::size_t k = 0; k < 12; ++k) {
            for (std::size_t l = 0; l < L; ++l) {
                CHECK(std::abs(out.quantiles[k * L + l] + out.quantiles[k * L + (L - 1 - l)] - 2.0 * out.mean[k]) < 1e-9);
            }
        }
    }
}
