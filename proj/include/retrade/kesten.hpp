#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "retrade/distributions.hpp"
#include "retrade/errors.hpp"
#include "retrade/returns.hpp"
#include "retrade/rng.hpp"

namespace retrade {

// Random-coefficient autoregression
//   r_t = sum_{h=1..H} alpha_{h,t} r_{t-h} + eps_t,
// with fresh coefficient draws every step. The one-lag case is the sharp
// theory case: the stationary tail exponent solves E|alpha|^kappa = 1.
struct KestenParams {
    std::vector<DistSpec> coef_dists;  // one per lag; H = coef_dists.size()
    DistSpec shock_dist = DistSpec::normal(0.0, 1.0);
    std::size_t steps{0};
    std::uint64_t seed{1};
    std::size_t burn_in_multiple{10};  // burn-in = multiple * H, discarded

    std::size_t lags() const { return coef_dists.size(); }
};

inline void validate(const KestenParams& params) {
    if (params.coef_dists.empty()) throw DistributionError("kesten: need at least one lag");
    if (params.steps < 1) throw DistributionError("kesten: steps must be >= 1");
    for (const DistSpec& d : params.coef_dists) d.validate();
    params.shock_dist.validate();
    // Stationarity is only sharp for H = 1; enforce it there.
    if (params.lags() == 1 && params.coef_dists[0].log_abs_moment() >= 0.0)
        throw NonStationaryError("kesten: E log|alpha| >= 0, no stationary solution");
}

// Core recursion driven by an externally supplied shock sequence. Coefficient
// draws still come from `rng` (degenerate specs consume nothing).
inline std::vector<double> simulate_kesten_given_shocks(const std::vector<DistSpec>& coef_dists,
                                                        std::span<const double> shocks,
                                                        Rng& rng, std::size_t burn_in) {
    const std::size_t H = coef_dists.size();
    std::vector<double> history(H, 0.0);  // r_{t-1}, r_{t-2}, ...
    std::vector<double> out;
    out.reserve(shocks.size() > burn_in ? shocks.size() - burn_in : 0);
    for (std::size_t t = 0; t < shocks.size(); ++t) {
        double r = shocks[t];
        for (std::size_t h = 0; h < H; ++h) r += coef_dists[h].sample(rng) * history[h];
        for (std::size_t h = H; h-- > 1;) history[h] = history[h - 1];
        history[0] = r;
        if (t >= burn_in) out.push_back(r);
    }
    return out;
}

inline ReturnSeries simulate_kesten(const KestenParams& params) {
    validate(params);
    const std::size_t burn_in = params.burn_in_multiple * params.lags();
    Rng coef_rng(params.seed, 0x6b657374U);   // coefficient stream
    Rng shock_rng(params.seed, 0x73686f63U);  // shock stream
    std::vector<double> shocks(params.steps + burn_in);
    for (double& s : shocks) s = params.shock_dist.sample(shock_rng);
    ReturnSeries series;
    series.returns = simulate_kesten_given_shocks(params.coef_dists, shocks, coef_rng, burn_in);
    return series;
}

// Tail exponent kappa > 0 solving E|alpha|^kappa = 1 for the one-lag
// coefficient law, by bracketed bisection on quadrature/exact moment
// evaluations. Residual tolerance 1e-6 on the moment equation.
inline double tail_exponent_oracle(const DistSpec& coef_dist, double kappa_max = 200.0) {
    coef_dist.validate();
    if (coef_dist.log_abs_moment() >= 0.0)
        throw NonStationaryError("tail_exponent_oracle: E log|alpha| >= 0");

    auto g = [&coef_dist](double kappa) { return coef_dist.abs_moment(kappa) - 1.0; };

    // g(0) = 0 and g'(0) = E log|alpha| < 0, so scan upward for the first
    // sign change back to positive territory.
    double lo = 0.0, hi = 0.0;
    double prev = 1e-3;
    double g_prev = g(prev);
    if (g_prev > 0.0)
        throw NoRootError("tail_exponent_oracle: moment function positive at kappa -> 0");
    for (double k = 2e-3; k <= kappa_max; k *= 1.5) {
        double gk = g(k);
        if (!std::isfinite(gk))
            throw NoRootError("tail_exponent_oracle: moment diverged before crossing 1");
        if (gk >= 0.0) {
            lo = prev;
            hi = k;
            break;
        }
        prev = k;
        g_prev = gk;
    }
    if (hi == 0.0)
        throw NoRootError("tail_exponent_oracle: E|alpha|^kappa < 1 on (0, " +
                          std::to_string(kappa_max) + "]");

    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double gm = g(mid);
        if (std::abs(gm) <= 1e-6) return mid;
        if (gm < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Inverse calibration: scale of a zero-mean normal coefficient law whose
// moment equation has root kappa. E|sigma Z|^kappa = 1 gives
// sigma = (E|Z|^kappa)^(-1/kappa).
inline double normal_scale_for_tail_index(double kappa) {
    if (!(kappa > 0.0)) throw DistributionError("normal_scale_for_tail_index: kappa must be > 0");
    double moment = DistSpec::normal(0.0, 1.0).abs_moment(kappa);
    return std::pow(moment, -1.0 / kappa);
}

}  // namespace retrade
