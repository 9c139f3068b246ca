#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace retrade {

inline double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

inline double variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

inline double stderr_of_mean(std::span<const double> x) {
    return x.empty() ? 0.0 : std::sqrt(variance(x) / static_cast<double>(x.size()));
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// One-sided Mann-Whitney rank test of H1: samples in `hi` are stochastically
// larger than samples in `lo`. Returns the normal-approximation z score
// (tie-corrected); p = 1 - normal_cdf(z).
inline double mann_whitney_z(std::span<const double> lo, std::span<const double> hi) {
    struct Tagged {
        double v;
        int group;
    };
    std::vector<Tagged> all;
    all.reserve(lo.size() + hi.size());
    for (double v : lo) all.push_back({v, 0});
    for (double v : hi) all.push_back({v, 1});
    std::sort(all.begin(), all.end(), [](const Tagged& a, const Tagged& b) { return a.v < b.v; });

    const double n1 = static_cast<double>(lo.size());
    const double n2 = static_cast<double>(hi.size());
    const double n = n1 + n2;
    double rank_sum_hi = 0.0;
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < all.size()) {
        std::size_t j = i;
        while (j < all.size() && all[j].v == all[i].v) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
        for (std::size_t k = i; k < j; ++k)
            if (all[k].group == 1) rank_sum_hi += avg_rank;
        double t = static_cast<double>(j - i);
        tie_term += t * (t * t - 1.0);
        i = j;
    }
    double u = rank_sum_hi - n2 * (n2 + 1.0) / 2.0;
    double mu = n1 * n2 / 2.0;
    double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (var <= 0.0) return 0.0;
    return (u - mu) / std::sqrt(var);
}

// Least-squares slope of y on x.
inline double ols_slope(std::span<const double> x, std::span<const double> y) {
    double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx == 0.0 ? 0.0 : sxy / sxx;
}

}  // namespace retrade
