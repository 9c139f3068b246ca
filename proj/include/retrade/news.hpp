#pragma once

#include <cstdint>
#include <vector>

#include "retrade/errors.hpp"
#include "retrade/rng.hpp"

namespace retrade {

// Exogenous news: a two-state (calm/turbulent) Markov volatility regime on
// the shock scale. Sticky regimes produce long-range correlation in shock
// magnitudes while leaving signs independent.
struct NewsProcess {
    double stay_calm{0.99};       // P(calm -> calm)
    double stay_turbulent{0.98};  // P(turbulent -> turbulent)
    double calm_scale{0.1};
    double turbulent_scale{1.0};
};

inline void validate(const NewsProcess& news) {
    if (!(news.stay_calm > 0.0 && news.stay_calm < 1.0) ||
        !(news.stay_turbulent > 0.0 && news.stay_turbulent < 1.0))
        throw DistributionError("news: transition probabilities must lie in (0,1)");
    if (!(news.calm_scale > 0.0) || !(news.turbulent_scale > 0.0))
        throw DistributionError("news: shock scales must be positive");
}

struct NewsPath {
    std::vector<int> regime;     // 0 = calm, 1 = turbulent
    std::vector<double> scale;   // per-step shock scale
    std::vector<double> shock;   // scale * standard normal draw
};

inline NewsPath generate_news(const NewsProcess& news, std::size_t steps, std::uint64_t seed) {
    validate(news);
    Rng rng(seed, 0x6e657773U);
    NewsPath path;
    path.regime.reserve(steps);
    path.scale.reserve(steps);
    path.shock.reserve(steps);
    int state = 0;  // sessions open calm
    for (std::size_t t = 0; t < steps; ++t) {
        double stay = state == 0 ? news.stay_calm : news.stay_turbulent;
        if (rng.uniform() >= stay) state = 1 - state;
        double scale = state == 0 ? news.calm_scale : news.turbulent_scale;
        path.regime.push_back(state);
        path.scale.push_back(scale);
        path.shock.push_back(scale * rng.normal());
    }
    return path;
}

}  // namespace retrade
