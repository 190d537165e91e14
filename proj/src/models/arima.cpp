#include "tsagent/models/arima.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

#include "nelder_mead.hpp"
#include "tsagent/core/error.hpp"
#include "tsagent/features/features.hpp"
#include "tsagent/models/baselines.hpp"

namespace tsagent::models {

namespace {

constexpr int kMaxPQ = 3;
constexpr double kSeasonalDifferenceThreshold = 0.64;
constexpr double kRootMargin = 1e-3;

std::vector<double> difference(std::span<const double> y, int lag) {
    std::vector<double> out;
    const auto l = static_cast<std::size_t>(lag);
    for (std::size_t t = l; t < y.size(); ++t) out.push_back(y[t] - y[t - l]);
    return out;
}

// (1 - sum a_i B^i)(1 - sum A_j B^{jm}) as coefficients c with 1 - sum c_i B^i.
std::vector<double> expand_ar(std::span<const double> ar, std::span<const double> sar, int m) {
    const std::size_t len = ar.size() + sar.size() * static_cast<std::size_t>(m);
    std::vector<double> poly(len + 1, 0.0);  // polynomial in B with poly[0] = 1
    poly[0] = 1.0;
    for (std::size_t i = 0; i < ar.size(); ++i) poly[i + 1] = -ar[i];
    std::vector<double> out = poly;
    for (std::size_t j = 0; j < sar.size(); ++j) {
        const std::size_t shift = (j + 1) * static_cast<std::size_t>(m);
        for (std::size_t i = 0; i + shift <= len; ++i) out[i + shift] += -sar[j] * poly[i];
    }
    std::vector<double> c(len);
    for (std::size_t i = 1; i <= len; ++i) c[i - 1] = -out[i];
    return c;
}

// (1 + sum b_i B^i)(1 + sum B_j B^{jm}) as coefficients c with 1 + sum c_i B^i.
std::vector<double> expand_ma(std::span<const double> ma, std::span<const double> sma, int m) {
    const std::size_t len = ma.size() + sma.size() * static_cast<std::size_t>(m);
    std::vector<double> poly(len + 1, 0.0);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < ma.size(); ++i) poly[i + 1] = ma[i];
    std::vector<double> out = poly;
    for (std::size_t j = 0; j < sma.size(); ++j) {
        const std::size_t shift = (j + 1) * static_cast<std::size_t>(m);
        for (std::size_t i = 0; i + shift <= len; ++i) out[i + shift] += sma[j] * poly[i];
    }
    return {out.begin() + 1, out.end()};
}

bool roots_clear(std::span<const double> coefficients, double margin) {
    std::size_t k = coefficients.size();
    while (k > 0 && coefficients[k - 1] == 0.0) --k;
    if (k == 0) return true;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) companion(0, static_cast<Eigen::Index>(i)) = coefficients[i];
    for (std::size_t i = 1; i < k; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    const Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    for (const auto& lambda : solver.eigenvalues()) {
        if (std::abs(lambda) >= 1.0 - margin) return false;
    }
    return true;
}

struct Layout {
    int p, q, P, Q, m;
    bool intercept;
    std::size_t size() const { return static_cast<std::size_t>(p + q + P + Q + (intercept ? 1 : 0)); }
};

struct Unpacked {
    std::vector<double> ar, ma, sar, sma;
    double mean = 0.0;
};

Unpacked unpack(const Layout& l, const std::vector<double>& x) {
    Unpacked u;
    std::size_t i = 0;
    for (int k = 0; k < l.p; ++k) u.ar.push_back(x[i++]);
    for (int k = 0; k < l.q; ++k) u.ma.push_back(x[i++]);
    for (int k = 0; k < l.P; ++k) u.sar.push_back(x[i++]);
    for (int k = 0; k < l.Q; ++k) u.sma.push_back(x[i++]);
    if (l.intercept) u.mean = x[i++];
    return u;
}

bool admissible(const Unpacked& u) {
    std::vector<double> neg_ma(u.ma.size()), neg_sma(u.sma.size());
    for (std::size_t i = 0; i < u.ma.size(); ++i) neg_ma[i] = -u.ma[i];
    for (std::size_t i = 0; i < u.sma.size(); ++i) neg_sma[i] = -u.sma[i];
    return roots_clear(u.ar, kRootMargin) && roots_clear(u.sar, kRootMargin) && roots_clear(neg_ma, kRootMargin) &&
           roots_clear(neg_sma, kRootMargin);
}

// Residuals of the mean-form ARMA on w; the sum of squares counts t >= start only.
double css(std::span<const double> w, const Unpacked& u, int m, std::size_t start, std::vector<double>* residuals) {
    const std::vector<double> a = expand_ar(u.ar, u.sar, m);
    const std::vector<double> b = expand_ma(u.ma, u.sma, m);
    const std::size_t n = w.size();
    std::vector<double> e(n, 0.0);
    double sum = 0.0;
    for (std::size_t t = a.size(); t < n; ++t) {
        double pred = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) pred += a[i] * (w[t - i - 1] - u.mean);
        for (std::size_t j = 0; j < b.size() && j < t; ++j) pred += b[j] * e[t - j - 1];
        e[t] = (w[t] - u.mean) - pred;
        if (t >= start) sum += e[t] * e[t];
    }
    if (residuals) *residuals = std::move(e);
    return sum;
}

std::vector<double> differenced(std::span<const double> y, int d, int D, int m) {
    std::vector<double> w(y.begin(), y.end());
    for (int i = 0; i < D; ++i) w = difference(w, m);
    for (int i = 0; i < d; ++i) w = difference(w, 1);
    return w;
}

bool nearly_constant(std::span<const double> w, std::span<const double> reference) {
    if (w.empty()) return true;
    double scale = 0.0;
    for (double v : reference) scale = std::max(scale, std::abs(v));
    const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
    return *hi - *lo <= 1e-10 * std::max(scale, 1e-300);
}

ArimaOrder fit_on_differenced(std::span<const double> w, int p, int d, int q, int P, int D, int Q, int m,
                              bool intercept, std::size_t start) {
    ArimaOrder order{p, d, q, P, D, Q, m, intercept, {}, {}, {}, {}, 0.0, 0.0, 0.0};
    order.aicc = std::numeric_limits<double>::quiet_NaN();
    const Layout layout{p, q, P, Q, m, intercept};
    if (w.size() <= start) return order;

    double w_mean = 0.0;
    for (double v : w) w_mean += v;
    w_mean /= static_cast<double>(w.size());
    double w_sd = 0.0;
    for (double v : w) w_sd += (v - w_mean) * (v - w_mean);
    w_sd = std::sqrt(w_sd / static_cast<double>(w.size()));

    std::vector<double> x0(layout.size(), 0.0);
    std::vector<double> step(layout.size(), 0.1);
    if (intercept) {
        x0.back() = w_mean;
        step.back() = 0.1 * std::max(w_sd, 1e-8);
    }
    auto objective = [&](const std::vector<double>& x) {
        const Unpacked u = unpack(layout, x);
        if (!admissible(u)) return std::numeric_limits<double>::max();
        return css(w, u, m, start, nullptr);
    };
    detail::NelderMeadResult best = detail::nelder_mead(objective, x0, step);
    // One restart from the optimum guards against early simplex collapse.
    best = detail::nelder_mead(objective, best.x, step);

    const Unpacked u = unpack(layout, best.x);
    if (!admissible(u)) return order;
    order.ar = u.ar;
    order.ma = u.ma;
    order.seasonal_ar = u.sar;
    order.seasonal_ma = u.sma;
    order.mean = u.mean;

    const double n_eff = static_cast<double>(w.size() - start);
    const double sum = css(w, u, m, start, nullptr);
    order.sigma2 = sum / n_eff;
    const double k = static_cast<double>(layout.size()) + 1.0;
    if (!(order.sigma2 > 0.0) || !(n_eff - k - 1.0 > 0.0)) return order;
    const double loglik = -0.5 * n_eff * (std::log(2.0 * std::numbers::pi * order.sigma2) + 1.0);
    order.aicc = -2.0 * loglik + 2.0 * k + 2.0 * k * (k + 1.0) / (n_eff - k - 1.0);
    return order;
}

std::size_t conditioning_start(int m, bool seasonal) {
    return static_cast<std::size_t>(kMaxPQ + (seasonal ? m : 0));
}

}  // namespace

std::string arima_label(const ArimaOrder& o) {
    std::string s = "ARIMA(" + std::to_string(o.p) + "," + std::to_string(o.d) + "," + std::to_string(o.q) + ")";
    if (o.P || o.D || o.Q) {
        s += "(" + std::to_string(o.P) + "," + std::to_string(o.D) + "," + std::to_string(o.Q) + ")[" +
             std::to_string(o.season_length) + "]";
    }
    if (o.intercept) s += (o.d + o.D == 1) ? " with drift" : " with mean";
    return s;
}

bool roots_outside_unit_circle(std::span<const double> coefficients) { return roots_clear(coefficients, 0.0); }

int kpss_differences(std::span<const double> y) {
    std::vector<double> w(y.begin(), y.end());
    int d = 0;
    while (d < 2 && w.size() >= 10 && !features::kpss(w).level_stationary) {
        w = difference(w, 1);
        ++d;
    }
    return d;
}

ArimaOrder fit_arima(std::span<const double> y, int p, int d, int q, int P, int D, int Q, int m, bool intercept) {
    const std::vector<double> w = differenced(y, d, D, m);
    const std::size_t start = static_cast<std::size_t>(p + P * m);
    return fit_on_differenced(w, p, d, q, P, D, Q, m, intercept, start);
}

void arima_forecast(std::span<const double> y, const ArimaOrder& o, int h, std::vector<double>& mean,
                    std::vector<double>& sd) {
    const int m = o.season_length;
    const std::vector<double> w = differenced(y, o.d, o.D, m);
    Unpacked u{o.ar, o.ma, o.seasonal_ar, o.seasonal_ma, o.mean};
    std::vector<double> e_w;
    css(w, u, m, 0, &e_w);

    // Integrated AR polynomial: a(B) (1-B)^d (1-B^m)^D, stored as 1 - sum c_i B^i.
    std::vector<double> poly{1.0};
    auto multiply = [&](const std::vector<double>& other) {
        std::vector<double> out(poly.size() + other.size() - 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            for (std::size_t j = 0; j < other.size(); ++j) out[i + j] += poly[i] * other[j];
        }
        poly = std::move(out);
    };
    const std::vector<double> a = expand_ar(o.ar, o.seasonal_ar, m);
    std::vector<double> a_poly{1.0};
    for (double c : a) a_poly.push_back(-c);
    multiply(a_poly);
    for (int i = 0; i < o.d; ++i) multiply({1.0, -1.0});
    for (int i = 0; i < o.D; ++i) {
        std::vector<double> seasonal(static_cast<std::size_t>(m) + 1, 0.0);
        seasonal.front() = 1.0;
        seasonal.back() = -1.0;
        multiply(seasonal);
    }
    std::vector<double> big_a(poly.size() - 1);
    for (std::size_t i = 1; i < poly.size(); ++i) big_a[i - 1] = -poly[i];
    const std::vector<double> b = expand_ma(o.ma, o.seasonal_ma, m);

    double a_at_one = 1.0;
    for (double c : a) a_at_one -= c;
    const double constant = o.intercept ? o.mean * a_at_one : 0.0;

    const std::size_t n = y.size();
    const std::size_t offset = n - w.size();
    std::vector<double> hist(y.begin(), y.end());
    std::vector<double> err(n, 0.0);
    for (std::size_t t = offset; t < n; ++t) err[t] = e_w[t - offset];

    const auto hh = static_cast<std::size_t>(h);
    mean.assign(hh, 0.0);
    for (std::size_t k = 0; k < hh; ++k) {
        const std::size_t t = n + k;
        double v = constant;
        for (std::size_t i = 0; i < big_a.size(); ++i) {
            if (t >= i + 1) v += big_a[i] * hist[t - i - 1];
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (t >= j + 1 && t - j - 1 < n) v += b[j] * err[t - j - 1];
        }
        hist.push_back(v);
        mean[k] = v;
    }

    std::vector<double> psi(hh, 0.0);
    psi[0] = 1.0;
    for (std::size_t j = 1; j < hh; ++j) {
        double v = j - 1 < b.size() ? b[j - 1] : 0.0;
        for (std::size_t i = 1; i <= std::min(j, big_a.size()); ++i) v += big_a[i - 1] * psi[j - i];
        psi[j] = v;
    }
    sd.assign(hh, 0.0);
    double acc = 0.0;
    for (std::size_t k = 0; k < hh; ++k) {
        acc += psi[k] * psi[k];
        sd[k] = std::sqrt(o.sigma2 * acc);
    }
}

ArimaFit auto_arima(std::span<const double> y, int m, int h, const QuantileLevels& levels) {
    if (h < 1) throw Error(ErrorCategory::invalid_argument, "horizon must be >= 1");
    const std::size_t n = y.size();
    if (n < 20) {
        throw Error(ErrorCategory::insufficient_data, "autoarima: needs at least 20 observations, got " +
                                                          std::to_string(n));
    }
    ArimaFit fit;
    const bool seasonal = m > 1 && n >= 3 * static_cast<std::size_t>(m);

    int D = 0;
    if (seasonal && features::seasonal_strength(features::decompose(y, m)) >= kSeasonalDifferenceThreshold) D = 1;
    const std::vector<double> seasonally_differenced = D ? difference(y, m) : std::vector<double>(y.begin(), y.end());
    const int d = kpss_differences(seasonally_differenced);
    const bool intercept = d + D <= 1;
    const std::vector<double> w = differenced(y, d, D, m);
    const int season = seasonal ? m : 1;

    auto emit = [&](const ArimaOrder& order) {
        fit.order = order;
        std::vector<double> mean, sd;
        arima_forecast(y, order, h, mean, sd);
        fit.output.mean = mean;
        fit.output.quantiles = gaussian_quantiles(mean, sd, levels);
    };

    if (nearly_constant(w, y)) {
        ArimaOrder order{0, d, 0, 0, D, 0, season, true, {}, {}, {}, {}, 0.0, 0.0, 0.0};
        for (double v : w) order.mean += v;
        order.mean = w.empty() ? 0.0 : order.mean / static_cast<double>(w.size());
        fit.candidates.push_back({0, 0, 0, 0, true, 0.0, "degenerate: differenced series is constant"});
        emit(order);
        return fit;
    }

    const std::size_t start = conditioning_start(m, seasonal);
    std::set<std::tuple<int, int, int, int>> visited;
    std::optional<ArimaOrder> best;
    auto evaluate = [&](int p, int q, int P, int Q) -> bool {
        if (p < 0 || q < 0 || P < 0 || Q < 0 || p > kMaxPQ || q > kMaxPQ) return false;
        if (!seasonal && (P > 0 || Q > 0)) return false;
        if (P > 1 || Q > 1) return false;
        if (!visited.insert({p, q, P, Q}).second) return false;
        ArimaOrder order = fit_on_differenced(w, p, d, q, P, D, Q, season, intercept, start);
        ArimaCandidate cand{p, q, P, Q, std::isfinite(order.aicc), order.aicc, {}};
        if (!cand.valid) cand.note = "not stationary/invertible or degenerate likelihood";
        fit.candidates.push_back(cand);
        if (cand.valid && (!best || order.aicc < best->aicc)) {
            best = std::move(order);
            return true;
        }
        return false;
    };

    evaluate(2, 2, seasonal ? 1 : 0, seasonal ? 1 : 0);
    evaluate(0, 0, 0, 0);
    evaluate(1, 0, seasonal ? 1 : 0, 0);
    evaluate(0, 1, 0, seasonal ? 1 : 0);

    for (int iteration = 0; best && iteration < 100; ++iteration) {
        const int p = best->p, q = best->q, P = best->P, Q = best->Q;
        bool improved = false;
        const int moves[][4] = {{1, 0, 0, 0},  {-1, 0, 0, 0}, {0, 1, 0, 0},   {0, -1, 0, 0}, {1, 1, 0, 0},
                                {-1, -1, 0, 0}, {0, 0, 1, 0}, {0, 0, -1, 0},  {0, 0, 0, 1},  {0, 0, 0, -1},
                                {0, 0, 1, 1},   {0, 0, -1, -1}};
        for (const auto& mv : moves) {
            if (evaluate(p + mv[0], q + mv[1], P + mv[2], Q + mv[3])) improved = true;
        }
        if (!improved) break;
    }

    if (!best) {
        fit.fallback = true;
        fit.output = naive(y, h, levels);
        fit.output.warnings.push_back("autoarima: no valid candidate, fell back to naive");
        fit.order = ArimaOrder{0, 1, 0, 0, 0, 0, 1, false, {}, {}, {}, {}, 0.0, 0.0,
                               std::numeric_limits<double>::quiet_NaN()};
        return fit;
    }
    emit(*best);
    return fit;
}

}  // namespace tsagent::models
