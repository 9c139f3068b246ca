#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "retrade/distributions.hpp"
#include "retrade/errors.hpp"
#include "retrade/news.hpp"
#include "retrade/returns.hpp"
#include "retrade/rng.hpp"

namespace retrade {

// Trend-following expectation rule: agent i anticipates
//   p^e_{i,t} = p_{t-1} * (1 + sum_h a_{ih} r_{t-h} + news_t + eta_{i,t}),
// with per-agent lag weights a_{ih} drawn once per run from weight_dists.
struct TrendRule {
    std::vector<DistSpec> weight_dists;  // one per lag
    double noise_scale{0.0};             // sd of the idiosyncratic term eta
};

inline void validate(const TrendRule& rule) {
    if (rule.weight_dists.empty()) throw DistributionError("trend rule: need at least one lag");
    for (const DistSpec& d : rule.weight_dists) d.validate();
    if (!(rule.noise_scale >= 0.0)) throw DistributionError("trend rule: noise scale < 0");
}

// Minimizer of sum |x_i - p| over the reals: any median. Even counts return
// the midpoint of the two middle order statistics (the canonical point of the
// minimizing interval). Partially reorders xs.
inline double l1_median(std::vector<double>& xs) {
    const std::size_t n = xs.size();
    const std::size_t mid = n / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid), xs.end());
    double upper = xs[mid];
    if (n % 2 == 1) return upper;
    double lower = *std::max_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

struct MarketRun {
    ReturnSeries series;       // returns plus materialized price path
    std::size_t floor_hits{0}; // steps truncated at the -99% return floor
    std::vector<std::vector<double>> agent_weights;  // [agent][lag], as drawn
};

// Competitive market of trend-following speculators: each step every agent
// forms a resale-price expectation and the market clears at the median (the
// minimizer of the speculative surplus). Returns are computed from the
// resulting price path. `news` may be absent; then the common shock is zero.
inline MarketRun simulate_speculative_market(const TrendRule& rule,
                                             const std::optional<NewsProcess>& news,
                                             std::size_t n_agents, std::size_t steps,
                                             std::uint64_t seed, double p0 = 100.0) {
    validate(rule);
    if (news) validate(*news);
    if (n_agents < 1) throw DistributionError("market: need at least one agent");
    if (!(p0 > 0.0)) throw DegeneratePriceError("market: initial price must be positive");

    const std::size_t H = rule.weight_dists.size();
    Rng weight_rng(seed, 0x77656967U);
    Rng noise_rng(seed, 0x6e6f6973U);

    MarketRun run;
    run.agent_weights.assign(n_agents, std::vector<double>(H, 0.0));
    for (auto& w : run.agent_weights)
        for (std::size_t h = 0; h < H; ++h) w[h] = rule.weight_dists[h].sample(weight_rng);

    std::vector<double> shocks;
    if (news) shocks = generate_news(*news, steps, seed).shock;

    std::vector<double> lagged(H, 0.0);  // r_{t-1}, r_{t-2}, ...
    std::vector<double> expectations(n_agents);
    run.series.returns.reserve(steps);
    std::vector<double> prices;
    prices.reserve(steps + 1);
    prices.push_back(p0);

    double p = p0;
    for (std::size_t t = 0; t < steps; ++t) {
        double common = news ? shocks[t] : 0.0;
        for (std::size_t i = 0; i < n_agents; ++i) {
            double e = common;
            for (std::size_t h = 0; h < H; ++h) e += run.agent_weights[i][h] * lagged[h];
            if (rule.noise_scale > 0.0) e += noise_rng.normal(0.0, rule.noise_scale);
            expectations[i] = p * (1.0 + e);
        }
        double p_next = l1_median(expectations);
        double r = (p_next - p) / p;
        if (1.0 + r <= 0.0) {  // price floor: truncate instead of crossing zero
            r = -0.99;
            p_next = p * (1.0 + r);
            ++run.floor_hits;
        }
        for (std::size_t h = H; h-- > 1;) lagged[h] = lagged[h - 1];
        lagged[0] = r;
        run.series.returns.push_back(r);
        p = p_next;
        prices.push_back(p);
    }
    run.series.prices = std::move(prices);
    return run;
}

}  // namespace retrade
