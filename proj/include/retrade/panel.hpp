#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "retrade/errors.hpp"
#include "retrade/rng.hpp"

namespace retrade {

// Multi-asset price/dividend panel. Row t holds end-of-period-t prices and
// the period-t dividend per unit held; dividends[0] is identically zero.
struct AssetPanel {
    std::vector<std::vector<double>> prices;
    std::vector<std::vector<double>> dividends;
    double beta{1.0};

    std::size_t periods() const { return prices.empty() ? 0 : prices.size() - 1; }
    std::size_t assets() const { return prices.empty() ? 0 : prices.front().size(); }
};

inline void validate(const AssetPanel& panel) {
    if (panel.prices.size() < 2) throw DimensionMismatchError("panel: need at least 2 rows");
    if (panel.prices.size() != panel.dividends.size())
        throw DimensionMismatchError("panel: price/dividend row mismatch");
    std::size_t n = panel.prices.front().size();
    for (std::size_t t = 0; t < panel.prices.size(); ++t) {
        if (panel.prices[t].size() != n || panel.dividends[t].size() != n)
            throw DimensionMismatchError("panel: ragged rows");
    }
    if (!(panel.beta > 0.0 && panel.beta <= 1.0))
        throw SpecError("panel: beta must lie in (0,1]");
}

// Arbitrage-free market generators. All of them construct prices backward
// from payoffs so that p_t = beta * E[p_{t+1} + d_{t+1} | history] holds
// exactly under the generator's own pricing measure.
struct MarketSpec {
    enum class Kind { binomial_tree, iid_dividend, terminal_payoff };
    Kind kind{Kind::binomial_tree};

    int periods{20};        // emitted panel horizon T
    int pricing_buffer{20}; // extra pricing periods so emitted prices stay positive
    double beta{1.0};

    // binomial_tree: dividend level follows a multiplicative binomial walk.
    double d0{1.0};
    double up{1.05};
    double down{0.95};
    double sim_up_prob{0.5};  // simulation measure; 0.5 reproduces the pricing measure

    // iid_dividend: two-point i.i.d. dividends (prices deterministic).
    double d_lo{0.0};
    double d_hi{2.0};
    double p_hi{0.5};
    double terminal_value{0.0};  // residual value priced beyond the buffer horizon

    // terminal_payoff: single two-point dividend at the final period.
    double payoff_a{1.0};
    double payoff_b{-1.0};
    double payoff_p{0.5};
};

inline void validate(const MarketSpec& spec) {
    if (spec.periods < 2) throw SpecError("market spec: periods must be >= 2");
    if (spec.pricing_buffer < 0) throw SpecError("market spec: pricing_buffer must be >= 0");
    if (!(spec.beta > 0.0 && spec.beta <= 1.0))
        throw SpecError("market spec: beta must lie in (0,1]");
    switch (spec.kind) {
        case MarketSpec::Kind::binomial_tree:
            if (!(spec.d0 > 0.0) || !(spec.up > 0.0) || !(spec.down > 0.0))
                throw SpecError("market spec: tree dividend levels must stay positive");
            if (!(spec.sim_up_prob > 0.0 && spec.sim_up_prob < 1.0))
                throw SpecError("market spec: sim_up_prob must lie in (0,1)");
            if (spec.pricing_buffer < 1)
                throw SpecError("market spec: tree needs pricing_buffer >= 1");
            break;
        case MarketSpec::Kind::iid_dividend:
            if (spec.d_lo > spec.d_hi) throw SpecError("market spec: d_lo > d_hi");
            if (!(spec.p_hi >= 0.0 && spec.p_hi <= 1.0))
                throw SpecError("market spec: p_hi outside [0,1]");
            if (spec.d_lo < 0.0) throw SpecError("market spec: dividends must be >= 0");
            if (spec.terminal_value < 0.0) throw SpecError("market spec: terminal_value < 0");
            break;
        case MarketSpec::Kind::terminal_payoff:
            if (!(spec.payoff_p >= 0.0 && spec.payoff_p <= 1.0))
                throw SpecError("market spec: payoff_p outside [0,1]");
            break;
    }
}

// Pricing state of one generator instance. The stored arrays are the
// conditional-expectation certificate: verify_construction() replays the
// exact pricing expression at every node and demands bitwise equality.
class MarketModel {
public:
    explicit MarketModel(const MarketSpec& spec) : spec_(spec) {
        validate(spec_);
        const int TT = spec_.periods + spec_.pricing_buffer;
        switch (spec_.kind) {
            case MarketSpec::Kind::binomial_tree: {
                tree_.assign(static_cast<std::size_t>(TT) + 1, {});
                tree_[static_cast<std::size_t>(TT)].assign(static_cast<std::size_t>(TT) + 1, 0.0);
                for (int t = TT - 1; t >= 0; --t) {
                    auto& row = tree_[static_cast<std::size_t>(t)];
                    row.assign(static_cast<std::size_t>(t) + 1, 0.0);
                    for (int s = 0; s <= t; ++s) row[static_cast<std::size_t>(s)] = node_price(t, s);
                }
                break;
            }
            case MarketSpec::Kind::iid_dividend:
            case MarketSpec::Kind::terminal_payoff: {
                path_.assign(static_cast<std::size_t>(spec_.periods) + 1, 0.0);
                for (int t = spec_.periods; t >= 0; --t)
                    path_[static_cast<std::size_t>(t)] = deterministic_price(t);
                break;
            }
        }
    }

    const MarketSpec& spec() const { return spec_; }

    double tree_dividend(int t, int s) const {
        return spec_.d0 * std::pow(spec_.up, s) * std::pow(spec_.down, t - s);
    }

    // One sampled panel of independent assets under the simulation measure.
    AssetPanel sample_panel(std::size_t n_assets, Rng& rng) const {
        const std::size_t T = static_cast<std::size_t>(spec_.periods);
        AssetPanel panel;
        panel.beta = spec_.beta;
        panel.prices.assign(T + 1, std::vector<double>(n_assets, 0.0));
        panel.dividends.assign(T + 1, std::vector<double>(n_assets, 0.0));
        for (std::size_t a = 0; a < n_assets; ++a) {
            switch (spec_.kind) {
                case MarketSpec::Kind::binomial_tree: {
                    int s = 0;
                    panel.prices[0][a] = tree_[0][0];
                    for (std::size_t t = 1; t <= T; ++t) {
                        if (rng.uniform() < spec_.sim_up_prob) ++s;
                        panel.prices[t][a] = tree_[t][static_cast<std::size_t>(s)];
                        panel.dividends[t][a] = tree_dividend(static_cast<int>(t), s);
                    }
                    break;
                }
                case MarketSpec::Kind::iid_dividend: {
                    for (std::size_t t = 0; t <= T; ++t) panel.prices[t][a] = path_[t];
                    for (std::size_t t = 1; t <= T; ++t)
                        panel.dividends[t][a] = rng.uniform() < spec_.p_hi ? spec_.d_hi : spec_.d_lo;
                    break;
                }
                case MarketSpec::Kind::terminal_payoff: {
                    for (std::size_t t = 0; t <= T; ++t) panel.prices[t][a] = path_[t];
                    panel.dividends[T][a] =
                        rng.uniform() < spec_.payoff_p ? spec_.payoff_a : spec_.payoff_b;
                    break;
                }
            }
        }
        return panel;
    }

    // Replay the construction identity p_t = beta * E[p_{t+1} + d_{t+1}] at
    // every node. Bit-exact for the tree (identical expression); the
    // deterministic models are re-summed in a different association order, so
    // they get a relative tolerance instead.
    bool verify_construction(double tol = 1e-12) const {
        switch (spec_.kind) {
            case MarketSpec::Kind::binomial_tree: {
                const int TT = spec_.periods + spec_.pricing_buffer;
                for (int t = 0; t < TT; ++t)
                    for (int s = 0; s <= t; ++s)
                        if (tree_[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] !=
                            node_price(t, s))
                            return false;
                return true;
            }
            case MarketSpec::Kind::iid_dividend: {
                double mean_d = spec_.p_hi * spec_.d_hi + (1.0 - spec_.p_hi) * spec_.d_lo;
                for (int t = 0; t < spec_.periods; ++t) {
                    double lhs = path_[static_cast<std::size_t>(t)];
                    double rhs = spec_.beta * (path_[static_cast<std::size_t>(t) + 1] + mean_d);
                    if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(lhs))) return false;
                }
                return true;
            }
            case MarketSpec::Kind::terminal_payoff: {
                for (int t = 0; t < spec_.periods; ++t) {
                    double d = t + 1 == spec_.periods
                                   ? spec_.payoff_p * spec_.payoff_a +
                                         (1.0 - spec_.payoff_p) * spec_.payoff_b
                                   : 0.0;
                    double lhs = path_[static_cast<std::size_t>(t)];
                    double rhs = spec_.beta * (path_[static_cast<std::size_t>(t) + 1] + d);
                    if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(lhs))) return false;
                }
                return true;
            }
        }
        return false;
    }

private:
    double node_price(int t, int s) const {
        const auto& next = tree_[static_cast<std::size_t>(t) + 1];
        double x_up = next[static_cast<std::size_t>(s) + 1] + tree_dividend(t + 1, s + 1);
        double x_dn = next[static_cast<std::size_t>(s)] + tree_dividend(t + 1, s);
        return spec_.beta * (0.5 * (x_up + x_dn));
    }

    double deterministic_price(int t) const {
        if (spec_.kind == MarketSpec::Kind::iid_dividend) {
            double mean_d = spec_.p_hi * spec_.d_hi + (1.0 - spec_.p_hi) * spec_.d_lo;
            int horizon = spec_.periods + spec_.pricing_buffer - t;
            double p = 0.0;
            double disc = 1.0;
            for (int k = 1; k <= horizon; ++k) {
                disc *= spec_.beta;
                p += disc * mean_d;
            }
            return p + disc * spec_.terminal_value;
        }
        // terminal payoff at T, nothing after
        if (t >= spec_.periods) return 0.0;
        double mean_d = spec_.payoff_p * spec_.payoff_a + (1.0 - spec_.payoff_p) * spec_.payoff_b;
        return std::pow(spec_.beta, spec_.periods - t) * mean_d;
    }

    MarketSpec spec_;
    std::vector<std::vector<double>> tree_;  // [t][up-count], pricing measure certificate
    std::vector<double> path_;               // deterministic kinds
};

inline AssetPanel generate_martingale_market(const MarketSpec& spec, int T, std::size_t n_assets,
                                             std::uint64_t seed) {
    MarketSpec local = spec;
    local.periods = T;
    MarketModel model(local);
    Rng rng(seed, 0x70616e6cU);
    return model.sample_panel(n_assets, rng);
}

}  // namespace retrade
