#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "retrade/errors.hpp"
#include "retrade/money.hpp"
#include "retrade/population.hpp"
#include "retrade/rng.hpp"
#include "retrade/trend_market.hpp"

namespace retrade {

enum class Side { buyer, seller };

struct DaAgent {
    Side side{Side::buyer};
    Money reservation;             // value v (buyer) or cost c (seller)
    int units{1};
    double concession_rate{-1.0};  // shade lost per step; < 0 means linear over the period
};

// Discrete-time random-arrival double auction: each step one random agent
// acts, either improving the standing quote or accepting a crossing one.
// Quotes start shaded away from reservations and concede over the period;
// from the second period on they open around the previous period's closing
// price instead, which is what lets repeated sessions converge the way lab
// sessions do.
struct DaConfig {
    int periods{5};
    int steps_per_period{600};
    Money tick{1};
    Money grid_lo{1};
    Money grid_hi{100000};
    bool improvement_rule{true};   // new bid must exceed standing bid, new ask undercut standing ask
    double initial_shade{0.20};    // opening shade as a fraction of reservation (period 1)
    double anchor_shade{0.02};     // anchored periods: opening offset from the anchor
    double anchor_cross{0.005};    // anchored periods: terminal overshoot past the anchor
    std::uint64_t seed{1};
};

struct RetradeConfig {
    DaConfig base;
    Money cash_endowment{0};       // speculative budget per trader; 0 disables re-trading
    TrendRule expectation_rule;    // resale-price expectations from within-session price trends
    double spec_shade{0.02};       // concession shade applied to speculative reservations
};

namespace detail {

struct AgentState {
    DaAgent spec;
    int demand_left{0};    // perishable sessions: use units still wanted this period
    int supply_left{0};    // perishable sessions: units still for sale this period
    // re-trade sessions:
    int produced_held{0};  // units from the original endowment (reservation = cost)
    int bought_held{0};    // units acquired in-session
    std::int64_t cash{0};
    std::vector<double> trend_weights;
};

struct Quote {
    Money price;
    int agent{-1};
    bool valid{false};
};

inline Money tick_floor(double x, Money tick) {
    double q = std::floor(x / static_cast<double>(tick.ticks));
    return Money{static_cast<std::int64_t>(q < 0 ? 0 : q) * tick.ticks};
}
inline Money tick_ceil(double x, Money tick) {
    double q = std::ceil(x / static_cast<double>(tick.ticks));
    return Money{static_cast<std::int64_t>(q < 0 ? 0 : q) * tick.ticks};
}

class Session {
public:
    Session(const DaConfig& cfg, const TraderPopulation& pop, const RetradeConfig* retrade)
        : cfg_(cfg), retrade_(retrade) {
        if (pop.values.empty() || pop.costs.empty()) throw NoTradersError{};
        if (cfg.periods < 1 || cfg.steps_per_period < 2)
            throw ConfigError("da: need periods >= 1 and steps_per_period >= 2");
        if (!(cfg.initial_shade >= 0.0 && cfg.initial_shade < 1.0))
            throw ConfigError("da: initial_shade must lie in [0,1)");
        if (cfg.tick <= Money{0}) throw ConfigError("da: tick must be positive");
        if (cfg.grid_lo < Money{1} || cfg.grid_lo > cfg.grid_hi)
            throw ConfigError("da: grid bounds must satisfy 1 <= lo <= hi");

        for (Money v : pop.values) agents_.push_back({{Side::buyer, v, 1, -1.0}, 0, 0, 0, 0, 0, {}});
        for (Money c : pop.costs) agents_.push_back({{Side::seller, c, 1, -1.0}, 0, 0, 0, 0, 0, {}});
        for (const AgentState& a : agents_)
            if (a.spec.reservation < cfg.grid_lo || a.spec.reservation > cfg.grid_hi)
                throw ConfigError("da: grid bounds exclude a reservation price");
        if (static_cast<int>(agents_.size()) > cfg.steps_per_period)
            throw ConfigError("da: steps_per_period must be >= number of traders");

        if (retrade_) {
            validate(retrade_->expectation_rule);
            if (retrade_->cash_endowment < Money{0})
                throw ConfigError("retrade: cash endowment must be >= 0");
            spec_on_ = retrade_->cash_endowment > Money{0};
            Rng wrng(cfg.seed, 0x72747764U);
            const auto& dists = retrade_->expectation_rule.weight_dists;
            for (AgentState& a : agents_) {
                a.cash = retrade_->cash_endowment.ticks;
                a.trend_weights.resize(dists.size());
                for (std::size_t h = 0; h < dists.size(); ++h)
                    a.trend_weights[h] = dists[h].sample(wrng);
                if (a.spec.side == Side::seller) a.produced_held = a.spec.units;
            }
            initial_units_ = 0;
            for (const AgentState& a : agents_) initial_units_ += a.produced_held;
        }
    }

    TransactionLog run() {
        Rng pick_rng(cfg_.seed, 0x64617263U);
        Rng noise_rng(cfg_.seed, 0x65787063U);
        const int S = cfg_.steps_per_period;
        for (int period = 0; period < cfg_.periods; ++period) {
            bid_ = Quote{};
            ask_ = Quote{};
            if (!retrade_) {  // perishable good: fresh endowments every period
                for (AgentState& a : agents_) {
                    a.demand_left = a.spec.side == Side::buyer ? a.spec.units : 0;
                    a.supply_left = a.spec.side == Side::seller ? a.spec.units : 0;
                }
            }
            for (int t = 0; t < S; ++t) {
                std::int64_t now = static_cast<std::int64_t>(period) * S + t;
                int who = static_cast<int>(pick_rng.index(agents_.size()));
                double lambda = static_cast<double>(t) / static_cast<double>(S - 1);
                if (!retrade_)
                    act_perishable(who, t, lambda, now);
                else
                    act_retrade(who, t, lambda, now, noise_rng);
            }
            if (!log_.empty()) anchor_ = log_.entries.back().price;
        }
        return log_;
    }

    const std::vector<AgentState>& agents() const { return agents_; }

private:
    double shade(const AgentState& a, int t) const {
        double rate = a.spec.concession_rate >= 0.0
                          ? a.spec.concession_rate
                          : 1.0 / static_cast<double>(cfg_.steps_per_period - 1);
        return cfg_.initial_shade * std::max(0.0, 1.0 - rate * static_cast<double>(t));
    }

    // Use-value quote targets. Period 1 concedes from a shaded reservation;
    // anchored periods open near the previous close and overshoot slightly so
    // the two sides cross before the period ends.
    Money buyer_target(const AgentState& a, int t, double lambda) const {
        double v = static_cast<double>(a.spec.reservation.ticks);
        if (!anchor_) return tick_floor(v * (1.0 - shade(a, t)), cfg_.tick);
        double A = static_cast<double>(anchor_->ticks);
        double raw = A * (1.0 - cfg_.anchor_shade * (1.0 - lambda) + cfg_.anchor_cross * lambda);
        return std::min(a.spec.reservation, tick_floor(raw, cfg_.tick));
    }
    Money seller_target(const AgentState& a, int t, double lambda) const {
        double c = static_cast<double>(a.spec.reservation.ticks);
        if (!anchor_) return tick_ceil(c * (1.0 + shade(a, t)), cfg_.tick);
        double A = static_cast<double>(anchor_->ticks);
        double raw = A * (1.0 + cfg_.anchor_shade * (1.0 - lambda) - cfg_.anchor_cross * lambda);
        return std::max(a.spec.reservation, tick_ceil(raw, cfg_.tick));
    }

    void act_perishable(int who, int t, double lambda, std::int64_t now) {
        AgentState& a = agents_[static_cast<std::size_t>(who)];
        if (a.spec.side == Side::buyer) {
            if (a.demand_left <= 0) return;
            Money target = clamp_price(buyer_target(a, t, lambda));
            if (ask_.valid && ask_.price <= target) {
                contract(now, ask_.price, who, ask_.agent);
                return;
            }
            maybe_post_bid(target, who);
        } else {
            if (a.supply_left <= 0) return;
            Money target = clamp_price(seller_target(a, t, lambda));
            if (bid_.valid && bid_.price >= target) {
                contract(now, bid_.price, bid_.agent, who);
                return;
            }
            maybe_post_ask(target, who);
        }
    }

    // Resale-price expectation from the within-session contract-price trend,
    // initialized at the first contract price.
    std::optional<double> expectation(const AgentState& a, Rng& noise_rng) {
        if (log_.empty()) return std::nullopt;
        double last = static_cast<double>(log_.entries.back().price.ticks);
        double drift = 0.0;
        const std::size_t H = a.trend_weights.size();
        const auto& e = log_.entries;
        for (std::size_t h = 0; h < H; ++h) {
            if (e.size() < h + 2) break;
            double p1 = static_cast<double>(e[e.size() - 1 - h].price.ticks);
            double p0 = static_cast<double>(e[e.size() - 2 - h].price.ticks);
            drift += a.trend_weights[h] * (p1 - p0) / p0;
        }
        double noise = retrade_->expectation_rule.noise_scale > 0.0
                           ? noise_rng.normal(0.0, retrade_->expectation_rule.noise_scale)
                           : 0.0;
        return std::max(static_cast<double>(cfg_.tick.ticks), last * (1.0 + drift + noise));
    }

    void act_retrade(int who, int t, double lambda, std::int64_t now, Rng& noise_rng) {
        AgentState& a = agents_[static_cast<std::size_t>(who)];
        std::optional<double> pe = spec_on_ ? expectation(a, noise_rng) : std::nullopt;

        // Buy side: use value for an uncovered use buyer, anticipated resale
        // price capped by remaining cash for a speculator.
        std::optional<Money> buy_target;
        bool wants_use = a.spec.side == Side::buyer && held(a) == 0;
        if (wants_use) buy_target = buyer_target(a, t, lambda);
        if (pe && a.cash > 0) {
            double res = std::min(*pe, static_cast<double>(a.cash));
            Money spec_target =
                tick_floor(res * (1.0 - retrade_->spec_shade * (1.0 - lambda)), cfg_.tick);
            if (spec_on_ && a.cash >= cfg_.grid_lo.ticks &&
                (!buy_target || spec_target > *buy_target))
                buy_target = spec_target;
        }
        if (buy_target) {
            *buy_target = clamp_price(*buy_target);
            if (spec_on_ && buy_target->ticks > a.cash) buy_target = Money{a.cash};
        }

        // Sell side: reservation of the cheapest-to-release unit held.
        std::optional<Money> sell_target;
        if (held(a) > 0) {
            if (!spec_on_) {
                // With speculation disabled only original sellers offer; a use
                // buyer's unit has no profitable resale.
                if (a.produced_held > 0) sell_target = seller_target(a, t, lambda);
            } else if (pe) {
                double base = static_cast<double>(a.spec.reservation.ticks);
                double res;
                if (a.spec.side == Side::seller) {
                    // produced units keep the cost floor; bought units are pure resale
                    res = a.bought_held > 0 ? *pe : std::max(base, *pe);
                } else {
                    // last unit covers use value; extras are pure resale
                    res = held(a) > 1 ? *pe : std::max(base, *pe);
                }
                sell_target = clamp_price(
                    tick_ceil(res * (1.0 + retrade_->spec_shade * (1.0 - lambda)), cfg_.tick));
            } else if (a.produced_held > 0) {
                sell_target = clamp_price(seller_target(a, t, lambda));
            }
        }

        if (buy_target && ask_.valid && ask_.agent != who && ask_.price <= *buy_target) {
            contract(now, ask_.price, who, ask_.agent);
            return;
        }
        if (sell_target && bid_.valid && bid_.agent != who && bid_.price >= *sell_target) {
            contract(now, bid_.price, bid_.agent, who);
            return;
        }
        if (buy_target && maybe_post_bid(*buy_target, who)) return;
        if (sell_target) maybe_post_ask(*sell_target, who);
    }

    static int held(const AgentState& a) { return a.produced_held + a.bought_held; }

    Money clamp_price(Money m) const { return std::clamp(m, cfg_.grid_lo, cfg_.grid_hi); }

    bool maybe_post_bid(Money target, int who) {
        if (target < cfg_.grid_lo) return false;
        if (bid_.valid && cfg_.improvement_rule && target <= bid_.price) return false;
        bid_ = {target, who, true};
        return true;
    }
    bool maybe_post_ask(Money target, int who) {
        if (target > cfg_.grid_hi) return false;
        if (ask_.valid && cfg_.improvement_rule && target >= ask_.price) return false;
        ask_ = {target, who, true};
        return true;
    }

    void contract(std::int64_t now, Money price, int buyer, int seller) {
        AgentState& b = agents_[static_cast<std::size_t>(buyer)];
        AgentState& s = agents_[static_cast<std::size_t>(seller)];
        if (!retrade_) {
            --b.demand_left;
            --s.supply_left;
        } else {
            if (s.bought_held > 0)  // release resale inventory before produced units
                --s.bought_held;
            else
                --s.produced_held;
            ++b.bought_held;
            if (spec_on_) {
                b.cash -= price.ticks;
                s.cash += price.ticks;
                if (b.cash < 0) throw Error("retrade: purchase exceeded available cash");
            }
            int total = 0;
            for (const AgentState& a : agents_) total += held(a);
            if (total != initial_units_) throw Error("retrade: unit conservation violated");
        }
        log_.append({now, price, buyer, seller});
        bid_ = Quote{};
        ask_ = Quote{};
    }

    DaConfig cfg_;
    const RetradeConfig* retrade_;
    bool spec_on_{false};
    int initial_units_{0};
    std::vector<AgentState> agents_;
    Quote bid_, ask_;
    std::optional<Money> anchor_;
    TransactionLog log_;
};

}  // namespace detail

inline TransactionLog run_da_session(const DaConfig& config, const TraderPopulation& pop) {
    detail::Session session(config, pop, nullptr);
    return session.run();
}

inline TransactionLog run_retrade_session(const RetradeConfig& config,
                                          const TraderPopulation& pop) {
    detail::Session session(config.base, pop, &config);
    return session.run();
}

}  // namespace retrade
