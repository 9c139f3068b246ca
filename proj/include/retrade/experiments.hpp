#pragma once

#include "retrade/auction.hpp"
#include "retrade/kesten.hpp"
#include "retrade/news.hpp"
#include "retrade/panel.hpp"
#include "retrade/population.hpp"
#include "retrade/trend_market.hpp"

// Canonical experiment presets: the fixed populations and treatment
// parameters used by the CLI defaults and the verification suites.
namespace retrade::experiments {

// Symmetric 6x6 induced-value design around 1000 ticks with one extramarginal
// trader per side; competitive-equilibrium interval [970, 1030].
inline TraderPopulation symmetric_6x6() {
    TraderPopulation pop;
    pop.values = {Money{1150}, Money{1120}, Money{1090}, Money{1060}, Money{1030}, Money{960}};
    pop.costs = {Money{850}, Money{880}, Money{910}, Money{940}, Money{970}, Money{1040}};
    return pop;
}

inline DaConfig baseline_da(std::uint64_t seed) {
    DaConfig cfg;
    cfg.periods = 5;
    cfg.steps_per_period = 600;
    cfg.tick = Money{1};
    cfg.grid_lo = Money{1};
    cfg.grid_hi = Money{100000};
    cfg.seed = seed;
    return cfg;
}

// Within-session trend-following expectations for the re-trade treatment.
inline TrendRule retrade_trend() {
    TrendRule rule;
    rule.weight_dists = {DistSpec::normal(0.4, 0.2)};
    rule.noise_scale = 0.01;
    return rule;
}

inline RetradeConfig retrade_treatment(Money cash, std::uint64_t seed) {
    RetradeConfig cfg;
    cfg.base = baseline_da(seed);
    cfg.cash_endowment = cash;
    cfg.expectation_rule = retrade_trend();
    return cfg;
}

inline Money low_cash() { return Money{1500}; }
inline Money high_cash() { return Money{4000}; }

// Speculative-market preset for the clustering experiments.
inline TrendRule clustering_trend() {
    TrendRule rule;
    rule.weight_dists = {DistSpec::normal(0.03, 0.10)};
    rule.noise_scale = 0.004;
    return rule;
}

inline NewsProcess sticky_news() {
    NewsProcess news;
    news.stay_calm = 0.99;
    news.stay_turbulent = 0.98;
    news.calm_scale = 0.005;
    news.turbulent_scale = 0.025;
    return news;
}

// Martingale binomial-tree market and its positively drifting twin.
inline MarketSpec martingale_tree() {
    MarketSpec spec;
    spec.kind = MarketSpec::Kind::binomial_tree;
    spec.periods = 20;
    spec.pricing_buffer = 20;
    spec.beta = 1.0;
    spec.d0 = 1.0;
    spec.up = 1.05;
    spec.down = 0.95;
    spec.sim_up_prob = 0.5;
    return spec;
}

inline MarketSpec drifting_tree() {
    MarketSpec spec = martingale_tree();
    spec.sim_up_prob = 0.6;  // simulated measure departs from the pricing measure
    return spec;
}

}  // namespace retrade::experiments
