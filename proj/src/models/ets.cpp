#include "tsagent/models/ets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tsagent/core/error.hpp"
#include "tsagent/features/features.hpp"

namespace tsagent::models {

namespace {

constexpr double kPhiMin = 0.8;
constexpr double kPhiMax = 0.98;
constexpr double kAlphaMin = 0.01;
constexpr double kAlphaMax = 0.99;

struct State {
    double level;
    double slope;
    std::vector<double> season;  // ring buffer, season[pos] is s_{t-m}
    std::size_t pos = 0;
};

State initial_state(const EtsParams& p) {
    State s{p.level0, p.trend0, p.season0, 0};
    if (p.season == EtsSeason::none) s.season.clear();
    return s;
}

double one_step(const EtsParams& p, const State& s) {
    double yhat = s.level;
    if (p.trend != EtsTrend::none) yhat += p.phi * s.slope;
    if (!s.season.empty()) yhat += s.season[s.pos];
    return yhat;
}

void update(const EtsParams& p, State& s, double error) {
    if (p.trend != EtsTrend::none) {
        s.level += p.phi * s.slope + p.alpha * error;
        s.slope = p.phi * s.slope + p.beta * error;
    } else {
        s.level += p.alpha * error;
    }
    if (!s.season.empty()) {
        s.season[s.pos] += p.gamma * error;
        s.pos = (s.pos + 1) % s.season.size();
    }
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

bool feasible(const EtsParams& p) {
    if (p.alpha < kAlphaMin - 1e-12 || p.alpha > kAlphaMax + 1e-12) return false;
    if (p.beta < -1e-12 || p.beta > p.alpha + 1e-12) return false;
    if (p.gamma < -1e-12 || p.gamma > 1.0 - p.alpha + 1e-12) return false;
    if (p.trend == EtsTrend::damped && (p.phi < kPhiMin - 1e-12 || p.phi > kPhiMax + 1e-12)) return false;
    return true;
}

void set_initial_states(std::span<const double> y, int m, EtsParams& p) {
    const std::size_t n = y.size();
    const bool seasonal = p.season == EtsSeason::additive;
    const std::size_t period = seasonal ? static_cast<std::size_t>(m) : 1;

    double first_mean = 0.0;
    for (std::size_t i = 0; i < period; ++i) first_mean += y[i];
    first_mean /= static_cast<double>(period);

    p.trend0 = 0.0;
    if (p.trend != EtsTrend::none) {
        if (seasonal) {
            double second_mean = 0.0;
            for (std::size_t i = period; i < 2 * period; ++i) second_mean += y[i];
            second_mean /= static_cast<double>(period);
            p.trend0 = (second_mean - first_mean) / static_cast<double>(period);
        } else {
            const std::size_t k = std::min<std::size_t>(n - 1, static_cast<std::size_t>(std::max(m, 4)));
            p.trend0 = (y[k] - y[0]) / static_cast<double>(k);
        }
    }
    // The first-period mean sits at the period's centre; step back to just before y[0].
    p.level0 = first_mean - (static_cast<double>(period - 1) / 2.0 + 1.0) * p.trend0;

    p.season0.clear();
    if (seasonal) {
        const features::Decomposition d = features::decompose(y, m);
        p.season0.assign(d.seasonal.begin(), d.seasonal.begin() + m);
    }
}

int parameter_count(const EtsParams& p) {
    int k = 1 + 1;  // alpha, level0
    if (p.trend != EtsTrend::none) k += 2;
    if (p.trend == EtsTrend::damped) k += 1;
    if (p.season == EtsSeason::additive) k += 1 + p.season_length;
    return k;
}

}  // namespace

std::string ets_label(EtsTrend trend, EtsSeason season) {
    std::string label = "A";
    label += trend == EtsTrend::none ? "N" : (trend == EtsTrend::additive ? "A" : "Ad");
    label += season == EtsSeason::none ? "N" : "A";
    return label;
}

double ets_sse(std::span<const double> y, const EtsParams& params) {
    State s = initial_state(params);
    double sse = 0.0;
    for (double v : y) {
        const double e = v - one_step(params, s);
        sse += e * e;
        update(params, s, e);
    }
    return sse;
}

EtsParams fit_ets(std::span<const double> y, int m, EtsTrend trend, EtsSeason season) {
    const std::size_t n = y.size();
    if (n < 10) throw Error(ErrorCategory::insufficient_data, "autoets: needs at least 10 observations");
    if (season == EtsSeason::additive && (m < 2 || n < 2 * static_cast<std::size_t>(m))) {
        throw Error(ErrorCategory::insufficient_data, "autoets: seasonal form needs m > 1 and length >= 2m");
    }

    EtsParams p;
    p.trend = trend;
    p.season = season;
    p.season_length = season == EtsSeason::additive ? m : 1;
    p.phi = trend == EtsTrend::damped ? kPhiMax : 1.0;
    set_initial_states(y, m, p);

    const bool has_trend = trend != EtsTrend::none;
    const bool has_season = season == EtsSeason::additive;
    const bool damped = trend == EtsTrend::damped;

    // Coarse grid, step 0.1.
    std::vector<double> phis = damped ? std::vector<double>{0.8, 0.9, 0.98} : std::vector<double>{1.0};
    double best_sse = std::numeric_limits<double>::infinity();
    EtsParams best = p;
    for (int ai = 1; ai <= 9; ++ai) {
        const double alpha = ai / 10.0;
        for (int bi = 0; bi <= (has_trend ? ai : 0); ++bi) {
            for (int gi = 0; gi <= (has_season ? 10 - ai : 0); ++gi) {
                for (double phi : phis) {
                    EtsParams c = p;
                    c.alpha = alpha;
                    c.beta = bi / 10.0;
                    c.gamma = gi / 10.0;
                    c.phi = phi;
                    const double sse = ets_sse(y, c);
                    if (sse < best_sse) {
                        best_sse = sse;
                        best = c;
                    }
                }
            }
        }
    }

    // Coordinate refinement, step 0.01 within +-0.1 of the incumbent.
    std::vector<double EtsParams::*> coords{&EtsParams::alpha};
    if (has_trend) coords.push_back(&EtsParams::beta);
    if (has_season) coords.push_back(&EtsParams::gamma);
    if (damped) coords.push_back(&EtsParams::phi);
    for (int sweep = 0; sweep < 25; ++sweep) {
        bool improved = false;
        for (double EtsParams::*coord : coords) {
            const double center = best.*coord;
            for (int i = -10; i <= 10; ++i) {
                if (i == 0) continue;
                EtsParams c = best;
                c.*coord = round2(center + i * 0.01);
                if (!feasible(c)) continue;
                const double sse = ets_sse(y, c);
                if (sse < best_sse) {
                    best_sse = sse;
                    best = c;
                    improved = true;
                }
            }
        }
        if (!improved) break;
    }

    best.sse = best_sse;
    best.sigma = std::sqrt(best_sse / static_cast<double>(n));
    best.n_parameters = parameter_count(best);

    double scale = 0.0;
    for (double v : y) scale = std::max(scale, std::abs(v));
    const double floor = std::pow(1e-10 * std::max(scale, 1e-300), 2);
    const double sigma2 = std::max(best_sse / static_cast<double>(n), floor);
    const double nd = static_cast<double>(n);
    const double k = best.n_parameters;
    const double loglik = -0.5 * nd * (std::log(2.0 * std::numbers::pi * sigma2) + 1.0);
    best.aicc = nd - k - 1.0 > 0.0 ? -2.0 * loglik + 2.0 * k + 2.0 * k * (k + 1.0) / (nd - k - 1.0)
                                   : std::numeric_limits<double>::quiet_NaN();
    return best;
}

std::vector<double> ets_point_forecast(std::span<const double> y, const EtsParams& params, int h) {
    State s = initial_state(params);
    for (double v : y) update(params, s, v - one_step(params, s));
    std::vector<double> out;
    for (int k = 0; k < h; ++k) {
        out.push_back(one_step(params, s));
        update(params, s, 0.0);
    }
    return out;
}

EtsFit auto_ets(std::span<const double> y, int m, int h, const QuantileLevels& levels, std::uint64_t seed) {
    if (h < 1) throw Error(ErrorCategory::invalid_argument, "horizon must be >= 1");
    const std::size_t n = y.size();
    EtsFit fit;
    std::optional<EtsParams> winner;
    const bool seasonal_ok = m > 1 && n >= 2 * static_cast<std::size_t>(m);

    for (EtsSeason season : {EtsSeason::none, EtsSeason::additive}) {
        for (EtsTrend trend : {EtsTrend::none, EtsTrend::additive, EtsTrend::damped}) {
            EtsCandidate cand{trend, season, false, 0.0, {}};
            if (n < 10) {
                cand.note = "needs at least 10 observations";
            } else if (season == EtsSeason::additive && !seasonal_ok) {
                cand.note = "seasonal form needs m > 1 and length >= 2m";
            } else {
                EtsParams p = fit_ets(y, m, trend, season);
                if (!std::isfinite(p.aicc)) {
                    cand.note = "non-finite likelihood";
                } else {
                    cand.fitted = true;
                    cand.aicc = p.aicc;
                    if (!winner || p.aicc < winner->aicc) winner = std::move(p);
                }
            }
            fit.candidates.push_back(std::move(cand));
        }
    }
    if (!winner) {
        throw Error(ErrorCategory::insufficient_data,
                    "autoets: no admissible model for a series of length " + std::to_string(n));
    }
    fit.params = *winner;
    fit.output.mean = ets_point_forecast(y, fit.params, h);

    if (!levels.empty()) {
        State base = initial_state(fit.params);
        for (double v : y) update(fit.params, base, v - one_step(fit.params, base));

        std::mt19937_64 rng(seed);
        std::normal_distribution<double> noise(0.0, 1.0);
        const auto hh = static_cast<std::size_t>(h);
        std::vector<std::vector<double>> paths(hh, std::vector<double>(kEtsSimulationPaths));
        for (int path = 0; path < kEtsSimulationPaths; ++path) {
            State s = base;
            for (std::size_t k = 0; k < hh; ++k) {
                const double e = fit.params.sigma * noise(rng);
                paths[k][path] = one_step(fit.params, s) + e;
                update(fit.params, s, e);
            }
        }
        for (std::size_t k = 0; k < hh; ++k) {
            std::sort(paths[k].begin(), paths[k].end());
            for (double q : levels.values()) fit.output.quantiles.push_back(sorted_quantile(paths[k], q));
        }
    }
    return fit;
}

}  // namespace tsagent::models
