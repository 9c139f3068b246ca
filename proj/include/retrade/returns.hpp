#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "retrade/errors.hpp"

namespace retrade {

// Percent-return sequence r_t = (p_t - p_{t-1}) / p_{t-1}, optionally carrying
// the aligned price path it came from (or would materialize).
struct ReturnSeries {
    std::vector<double> returns;
    std::optional<std::vector<double>> prices;

    std::size_t size() const { return returns.size(); }

    // Materialize p_t = p0 * prod(1 + r_s). Requires 1 + r > 0 throughout.
    std::vector<double> to_prices(double p0) const {
        if (!(p0 > 0.0)) throw NonPositivePriceError("to_prices: p0 must be positive");
        std::vector<double> out;
        out.reserve(returns.size() + 1);
        out.push_back(p0);
        double p = p0;
        for (double r : returns) {
            if (!(1.0 + r > 0.0))
                throw DegeneratePriceError("to_prices: gross return 1+r not positive");
            p *= 1.0 + r;
            out.push_back(p);
        }
        return out;
    }
};

inline std::vector<double> returns_from_prices(std::span<const double> prices) {
    if (prices.size() < 2) throw TooShortError("returns_from_prices: need at least 2 prices");
    std::vector<double> out;
    out.reserve(prices.size() - 1);
    for (std::size_t t = 0; t < prices.size(); ++t) {
        if (!(prices[t] > 0.0))
            throw NonPositivePriceError("returns_from_prices: non-positive price at index " +
                                        std::to_string(t));
        if (t > 0) out.push_back((prices[t] - prices[t - 1]) / prices[t - 1]);
    }
    return out;
}

inline ReturnSeries return_series_from_prices(std::vector<double> prices) {
    ReturnSeries s;
    s.returns = returns_from_prices(prices);
    s.prices = std::move(prices);
    return s;
}

}  // namespace retrade
