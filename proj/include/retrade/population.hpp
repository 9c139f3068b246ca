#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "retrade/errors.hpp"
#include "retrade/money.hpp"

namespace retrade {

// Buyer reservation values and seller costs, one market-period unit per entry.
// Duplicates are meaningful (several traders may share a valuation).
struct TraderPopulation {
    std::vector<Money> values;
    std::vector<Money> costs;

    bool empty() const { return values.empty() && costs.empty(); }
};

// One speculator's anticipated resale price, optionally capped by the most
// the trader could pay (the liquidity constraint).
struct Expectation {
    Money resale_price;
    std::optional<Money> cash_cap;

    Money effective() const {
        return cash_cap && *cash_cap < resale_price ? *cash_cap : resale_price;
    }
};

struct ExpectationSet {
    std::vector<Expectation> entries;
};

// Closed interval of prices attaining the common minimum of the potential
// surplus function V. Point estimate = midpoint rounded down.
struct PriceInterval {
    Money low;
    Money high;

    Money midpoint() const {
        std::int64_t lo = low.ticks, hi = high.ticks;
        // floor((lo+hi)/2) without overflow
        return Money{lo + (hi - lo) / 2};
    }
    bool contains(Money p) const { return low <= p && p <= high; }
    Money width() const { return high - low; }
};

// Time-ordered contract record of one session.
struct LogEntry {
    std::int64_t time{0};
    Money price;
    int buyer{-1};
    int seller{-1};
};

struct TransactionLog {
    std::vector<LogEntry> entries;

    void append(LogEntry e) {
        if (!entries.empty() && e.time <= entries.back().time)
            throw Error("TransactionLog: time indices must be strictly increasing");
        if (e.price <= Money{0}) throw Error("TransactionLog: prices must be positive");
        entries.push_back(e);
    }
    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

inline std::vector<Money> sorted(std::vector<Money> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace retrade
