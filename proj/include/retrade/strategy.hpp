#pragma once

#include <memory>
#include <span>
#include <vector>

#include "retrade/errors.hpp"

namespace retrade {

// History visible when deciding the period-t trade: rows 0..t-1 of the panel.
// Predictability is structural; the deciding rule never sees row t.
struct PanelHistory {
    std::span<const std::vector<double>> prices;
    std::span<const std::vector<double>> dividends;
};

class TradingStrategy {
public:
    virtual ~TradingStrategy() = default;
    virtual std::vector<double> initial_holdings(std::size_t n_assets) const = 0;
    // Fill `delta`, the period-t trade vector (executed at p_{t-1}), from the
    // truncated history and current holdings.
    virtual void trades(std::size_t t, const PanelHistory& hist,
                        std::span<const double> holdings, std::span<double> delta) const = 0;
};

class BuyAndHoldStrategy final : public TradingStrategy {
public:
    explicit BuyAndHoldStrategy(double h0 = 1.0) : h0_(h0) {}
    std::vector<double> initial_holdings(std::size_t n_assets) const override {
        return std::vector<double>(n_assets, h0_);
    }
    void trades(std::size_t, const PanelHistory&, std::span<const double>,
                std::span<double> delta) const override {
        for (double& d : delta) d = 0.0;
    }

private:
    double h0_;
};

// Buy after an up-move, sell after a down-move. `min_holdings` keeps the
// position from being run into the ground (set it negative to allow shorts).
class MomentumStrategy final : public TradingStrategy {
public:
    MomentumStrategy(double h0 = 10.0, double step = 1.0, double min_holdings = 0.0)
        : h0_(h0), step_(step), min_holdings_(min_holdings) {}

    std::vector<double> initial_holdings(std::size_t n_assets) const override {
        return std::vector<double>(n_assets, h0_);
    }

    void trades(std::size_t t, const PanelHistory& hist, std::span<const double> holdings,
                std::span<double> delta) const override {
        for (std::size_t a = 0; a < delta.size(); ++a) {
            delta[a] = 0.0;
            if (t < 2) continue;
            double last = hist.prices[t - 1][a];
            double prev = hist.prices[t - 2][a];
            double d = last > prev ? step_ : (last < prev ? -step_ : 0.0);
            if (holdings[a] + d < min_holdings_) d = 0.0;
            delta[a] = d;
        }
    }

private:
    double h0_, step_, min_holdings_;
};

// Fixed trade schedule; useful for worked examples and fuzzing.
class ScriptedStrategy final : public TradingStrategy {
public:
    ScriptedStrategy(std::vector<double> h0, std::vector<std::vector<double>> deltas)
        : h0_(std::move(h0)), deltas_(std::move(deltas)) {}

    std::vector<double> initial_holdings(std::size_t n_assets) const override {
        if (h0_.size() != n_assets)
            throw DimensionMismatchError("scripted strategy: initial holdings size mismatch");
        return h0_;
    }

    void trades(std::size_t t, const PanelHistory&, std::span<const double>,
                std::span<double> delta) const override {
        if (t - 1 >= deltas_.size())
            throw DimensionMismatchError("scripted strategy: no trade for period " +
                                         std::to_string(t));
        const auto& row = deltas_[t - 1];
        if (row.size() != delta.size())
            throw DimensionMismatchError("scripted strategy: trade vector size mismatch");
        for (std::size_t a = 0; a < delta.size(); ++a) delta[a] = row[a];
    }

private:
    std::vector<double> h0_;
    std::vector<std::vector<double>> deltas_;
};

}  // namespace retrade
