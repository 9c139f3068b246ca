#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "retrade/errors.hpp"
#include "retrade/panel.hpp"
#include "retrade/rng.hpp"
#include "retrade/stats.hpp"
#include "retrade/strategy.hpp"

namespace retrade {

// Per-period wealth under trading (W), under freezing the period's position
// (W*), and the re-trade advantage R = W - W*.
struct WealthPath {
    std::vector<double> wealth;       // W_t, t = 1..T (wealth[0] = W_0 = p_0 . H_0)
    std::vector<double> hold_wealth;  // W*_t, t = 1..T (hold_wealth[0] = W_0)
    std::vector<double> advantage;    // R_t, t = 1..T (advantage[0] = 0)
    std::vector<std::vector<double>> holdings;  // H_t, t = 0..T
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

// Evaluate a strategy on a panel. The identity
//   W_t - W*_t = (p_t - p_{t-1} + d_t) . dH_t
// is recomputed through both routes every period and must agree to 1e-12
// relative; a violation is an internal accounting bug, not user error.
inline WealthPath wealth_path(const AssetPanel& panel, const TradingStrategy& strategy) {
    validate(panel);
    const std::size_t T = panel.periods();
    const std::size_t n = panel.assets();

    WealthPath out;
    out.holdings.reserve(T + 1);
    out.holdings.push_back(strategy.initial_holdings(n));
    if (out.holdings[0].size() != n)
        throw DimensionMismatchError("wealth_path: initial holdings size mismatch");

    double w0 = detail::dot(panel.prices[0], out.holdings[0]);
    out.wealth.assign(1, w0);
    out.hold_wealth.assign(1, w0);
    out.advantage.assign(1, 0.0);

    std::vector<double> delta(n, 0.0);
    for (std::size_t t = 1; t <= T; ++t) {
        PanelHistory hist{
            std::span<const std::vector<double>>(panel.prices.data(), t),
            std::span<const std::vector<double>>(panel.dividends.data(), t)};
        strategy.trades(t, hist, out.holdings[t - 1], delta);

        std::vector<double> h = out.holdings[t - 1];
        for (std::size_t a = 0; a < n; ++a) h[a] += delta[a];

        double w = detail::dot(panel.prices[t], h) - detail::dot(delta, panel.prices[t - 1]) +
                   detail::dot(panel.dividends[t], h);
        double w_star = detail::dot(panel.prices[t], out.holdings[t - 1]) +
                        detail::dot(panel.dividends[t], out.holdings[t - 1]);
        double r = w - w_star;

        double r_direct = 0.0;
        for (std::size_t a = 0; a < n; ++a)
            r_direct +=
                (panel.prices[t][a] - panel.prices[t - 1][a] + panel.dividends[t][a]) * delta[a];
        double scale = std::max({1.0, std::abs(r), std::abs(w), std::abs(w_star)});
        if (std::abs(r - r_direct) > 1e-12 * scale)
            throw Error("wealth_path: advantage identity violated at t=" + std::to_string(t));

        out.wealth.push_back(w);
        out.hold_wealth.push_back(w_star);
        out.advantage.push_back(r);
        out.holdings.push_back(std::move(h));
    }
    return out;
}

// Monte Carlo test of E_t(R_t) = 0 on regenerated panels. Works on the
// discounted advantage beta^{t-1} (beta (p_t + d_t) - p_{t-1}) . dH_t, which
// coincides with R_t when beta = 1; with discounting the statement is exact
// for beta < 1 as well.
struct NoRetradeReport {
    std::vector<double> mean_t;
    std::vector<double> stderr_t;
    std::vector<double> z_t;
    double pooled_mean{0.0};
    double pooled_stderr{0.0};
    double pooled_z{0.0};
    std::size_t n_paths{0};
    bool pass{false};
};

inline NoRetradeReport test_no_retrade_advantage(const MarketSpec& spec,
                                                 const TradingStrategy& strategy,
                                                 std::size_t n_paths, std::uint64_t seed,
                                                 std::size_t n_assets = 1) {
    if (n_paths < 1000) throw SpecError("test_no_retrade_advantage: need n_paths >= 1000");
    MarketModel model(spec);
    if (!model.verify_construction())
        throw SpecError("test_no_retrade_advantage: generator failed its pricing audit");
    Rng rng(seed, 0x6e6f6172U);

    const std::size_t T = static_cast<std::size_t>(spec.periods);
    std::vector<double> sum(T, 0.0), sumsq(T, 0.0);
    double pooled_sum = 0.0, pooled_sumsq = 0.0;

    std::vector<double> delta(n_assets, 0.0);
    for (std::size_t path = 0; path < n_paths; ++path) {
        AssetPanel panel = model.sample_panel(n_assets, rng);
        WealthPath wp = wealth_path(panel, strategy);
        double disc = 1.0;
        for (std::size_t t = 1; t <= T; ++t) {
            for (std::size_t a = 0; a < n_assets; ++a)
                delta[a] = wp.holdings[t][a] - wp.holdings[t - 1][a];
            double adv = 0.0;
            for (std::size_t a = 0; a < n_assets; ++a)
                adv += disc * (spec.beta * (panel.prices[t][a] + panel.dividends[t][a]) -
                               panel.prices[t - 1][a]) *
                       delta[a];
            sum[t - 1] += adv;
            sumsq[t - 1] += adv * adv;
            pooled_sum += adv;
            pooled_sumsq += adv * adv;
            disc *= spec.beta;
        }
    }

    NoRetradeReport report;
    report.n_paths = n_paths;
    const double np = static_cast<double>(n_paths);
    bool all_t_ok = true;
    for (std::size_t t = 0; t < T; ++t) {
        double m = sum[t] / np;
        double var = (sumsq[t] - np * m * m) / (np - 1.0);
        double se = std::sqrt(std::max(0.0, var) / np);
        double z = se > 0.0 ? m / se : 0.0;
        report.mean_t.push_back(m);
        report.stderr_t.push_back(se);
        report.z_t.push_back(z);
        if (std::abs(z) >= 3.0) all_t_ok = false;
    }
    const double nn = np * static_cast<double>(T);
    report.pooled_mean = pooled_sum / nn;
    double pooled_var = (pooled_sumsq - nn * report.pooled_mean * report.pooled_mean) / (nn - 1.0);
    report.pooled_stderr = std::sqrt(std::max(0.0, pooled_var) / nn);
    report.pooled_z = report.pooled_stderr > 0.0 ? report.pooled_mean / report.pooled_stderr : 0.0;
    report.pass = all_t_ok && std::abs(report.pooled_z) < 3.0;
    return report;
}

// Concave increasing utility over final wealth.
struct UtilitySpec {
    enum class Family { linear, power, log_u, exponential };
    Family family{Family::linear};
    double param{0.0};  // power: relative risk aversion gamma > 0; exponential: a > 0

    void validate() const {
        switch (family) {
            case Family::linear:
            case Family::log_u:
                return;
            case Family::power:
                if (!(param > 0.0)) throw SpecError("utility: power family needs gamma > 0");
                return;
            case Family::exponential:
                if (!(param > 0.0)) throw SpecError("utility: exponential family needs a > 0");
                return;
        }
        throw SpecError("utility: unknown family");
    }

    bool needs_positive() const {
        return family == Family::power || family == Family::log_u;
    }

    double operator()(double w) const {
        switch (family) {
            case Family::linear:
                return w;
            case Family::log_u:
                if (!(w > 0.0)) throw UtilityDomainError("utility: log of non-positive wealth");
                return std::log(w);
            case Family::power: {
                if (!(w > 0.0)) throw UtilityDomainError("utility: power of non-positive wealth");
                if (param == 1.0) return std::log(w);
                return (std::pow(w, 1.0 - param) - 1.0) / (1.0 - param);
            }
            case Family::exponential:
                return -std::exp(-param * w) / param;
        }
        return w;
    }
};

// Jensen no-trade check: paired Monte Carlo estimate of
// E u(W_T) - E u(W*_T); PASS when the difference is <= 0 within 3 stderr.
struct JensenReport {
    double eu_trade{0.0};
    double eu_hold{0.0};
    double diff_mean{0.0};
    double diff_stderr{0.0};
    std::size_t n_paths{0};
    bool pass{false};
};

inline JensenReport jensen_check(const UtilitySpec& utility, const MarketSpec& spec,
                                 const TradingStrategy& strategy, std::size_t n_paths,
                                 std::uint64_t seed, std::size_t n_assets = 1) {
    utility.validate();
    MarketModel model(spec);
    if (!model.verify_construction())
        throw SpecError("jensen_check: generator failed its pricing audit");
    Rng rng(seed, 0x6a656e73U);

    double sum_trade = 0.0, sum_hold = 0.0, sum_diff = 0.0, sumsq_diff = 0.0;
    for (std::size_t path = 0; path < n_paths; ++path) {
        AssetPanel panel = model.sample_panel(n_assets, rng);
        WealthPath wp = wealth_path(panel, strategy);
        double ut = utility(wp.wealth.back());
        double uh = utility(wp.hold_wealth.back());
        sum_trade += ut;
        sum_hold += uh;
        double d = ut - uh;
        sum_diff += d;
        sumsq_diff += d * d;
    }
    const double np = static_cast<double>(n_paths);
    JensenReport report;
    report.n_paths = n_paths;
    report.eu_trade = sum_trade / np;
    report.eu_hold = sum_hold / np;
    report.diff_mean = sum_diff / np;
    double var = (sumsq_diff - np * report.diff_mean * report.diff_mean) / (np - 1.0);
    report.diff_stderr = std::sqrt(std::max(0.0, var) / np);
    report.pass = report.diff_mean <= 3.0 * report.diff_stderr;
    return report;
}

}  // namespace retrade
