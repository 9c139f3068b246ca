#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "retrade/errors.hpp"
#include "retrade/money.hpp"
#include "retrade/population.hpp"

namespace retrade {

// Price grid for argmin searches. Half-line argmin sets of degenerate
// populations are clipped to these bounds.
struct PriceGrid {
    Money lo{0};
    Money hi{0};
};

// V(p) = sum of (v - p) over values v >= p plus sum of (p - c) over costs
// c <= p: the total gains from trade still unrealized at standing price p.
inline Money potential_surplus(Money p, const TraderPopulation& pop) {
    std::int64_t total = 0;
    for (Money v : pop.values)
        if (v >= p) total += (v - p).ticks;
    for (Money c : pop.costs)
        if (c <= p) total += (p - c).ticks;
    return Money{total};
}

// Speculative counterpart: sum of |p_e - p| over anticipated resale prices,
// each clipped at the trader's cash cap first.
inline Money speculative_surplus(Money p, const ExpectationSet& exp) {
    std::int64_t total = 0;
    for (const Expectation& e : exp.entries) {
        Money eff = e.effective();
        total += eff >= p ? (eff - p).ticks : (p - eff).ticks;
    }
    return Money{total};
}

inline PriceGrid default_grid(const TraderPopulation& pop) {
    Money hi{0};
    Money lo{0};
    for (Money v : pop.values) {
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    for (Money c : pop.costs) {
        hi = std::max(hi, c);
        lo = std::min(lo, c);
    }
    return {std::min(lo, Money{0}), hi};
}

// Full argmin set of V over the grid. V is convex piecewise-linear with
// integer breakpoints, and its forward slope at p is
//   V(p+1) - V(p) = #{c <= p} - #{v >= p+1},
// non-decreasing in p, so the argmin is the closed interval where the slope
// changes sign.
inline PriceInterval equilibrium_interval(const TraderPopulation& pop, PriceGrid grid) {
    if (pop.empty()) throw EmptyPopulationError{};
    if (grid.lo > grid.hi) throw Error("equilibrium_interval: grid.lo > grid.hi");

    std::vector<Money> values = sorted(pop.values);
    std::vector<Money> costs = sorted(pop.costs);

    auto slope = [&](std::int64_t p) -> std::int64_t {
        auto supply = std::upper_bound(costs.begin(), costs.end(), Money{p}) - costs.begin();
        auto demand = values.end() - std::lower_bound(values.begin(), values.end(), Money{p + 1});
        return static_cast<std::int64_t>(supply) - static_cast<std::int64_t>(demand);
    };

    std::int64_t lo = grid.lo.ticks, hi = grid.hi.ticks;
    if (lo == hi) return {grid.lo, grid.hi};

    // First p in [lo, hi-1] with slope(p) >= 0; hi if none (V decreasing
    // throughout the grid).
    auto search = [&](std::int64_t threshold) {
        std::int64_t a = lo, b = hi;  // invariant: slope(p) < threshold for p < a
        while (a < b) {
            std::int64_t m = a + (b - a) / 2;
            if (slope(m) >= threshold)
                b = m;
            else
                a = m + 1;
        }
        return a;
    };
    std::int64_t first_flat = search(0);   // argmin lower end
    std::int64_t first_rise = search(1);   // first strictly increasing step
    return {Money{first_flat}, Money{first_rise}};
}

inline PriceInterval equilibrium_interval(const TraderPopulation& pop) {
    return equilibrium_interval(pop, default_grid(pop));
}

// Argmin interval of the speculative surplus over the grid; brackets every
// median of the clipped expectations. Uses the identity that placing the
// clipped prices on both sides of a TraderPopulation turns V into the L1
// distance to the multiset.
inline PriceInterval speculative_interval(const ExpectationSet& exp, PriceGrid grid) {
    TraderPopulation mirror;
    mirror.values.reserve(exp.entries.size());
    mirror.costs.reserve(exp.entries.size());
    for (const Expectation& e : exp.entries) {
        Money eff = e.effective();
        mirror.values.push_back(eff);
        mirror.costs.push_back(eff);
    }
    return equilibrium_interval(mirror, grid);
}

// V along a contract sequence plus per-step monotonicity flags.
struct SurplusTrajectory {
    std::vector<Money> surplus;        // V(p_t), one per log entry
    std::vector<bool> violation;       // true at t if V(p_t) > V(p_{t-1}); first entry false
    double violation_fraction{0.0};    // violations / (entries - 1); 0 for single-entry logs
};

inline SurplusTrajectory surplus_trajectory(const TransactionLog& log,
                                            const TraderPopulation& pop) {
    if (log.empty()) throw EmptyLogError{};
    SurplusTrajectory out;
    out.surplus.reserve(log.size());
    out.violation.assign(log.size(), false);
    for (const LogEntry& e : log.entries) out.surplus.push_back(potential_surplus(e.price, pop));
    std::size_t violations = 0;
    for (std::size_t i = 1; i < out.surplus.size(); ++i) {
        if (out.surplus[i] > out.surplus[i - 1]) {
            out.violation[i] = true;
            ++violations;
        }
    }
    out.violation_fraction =
        log.size() > 1 ? static_cast<double>(violations) / static_cast<double>(log.size() - 1)
                       : 0.0;
    return out;
}

// Efficiency denominator: total surplus of the optimal buyer/seller matching.
// Pairing the highest remaining value with the lowest remaining cost is
// optimal for this assignment structure.
inline Money max_extractable_surplus(const TraderPopulation& pop) {
    std::vector<Money> values = sorted(pop.values);
    std::vector<Money> costs = sorted(pop.costs);
    std::int64_t total = 0;
    std::size_t pairs = std::min(values.size(), costs.size());
    for (std::size_t i = 0; i < pairs; ++i) {
        Money v = values[values.size() - 1 - i];
        Money c = costs[i];
        if (v < c) break;
        total += (v - c).ticks;
    }
    return Money{total};
}

// Realized surplus of a perishable-good session: sum of (buyer value - seller
// cost) over contracts, given a resolver from agent id to reservation.
inline Money realized_surplus(const TransactionLog& log,
                              const std::function<Money(int)>& value_of,
                              const std::function<Money(int)>& cost_of) {
    std::int64_t total = 0;
    for (const LogEntry& e : log.entries) total += (value_of(e.buyer) - cost_of(e.seller)).ticks;
    return Money{total};
}

}  // namespace retrade
