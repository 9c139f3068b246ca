#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "retrade/auction.hpp"
#include "retrade/experiments.hpp"
#include "retrade/stats.hpp"
#include "retrade/surplus.hpp"

using namespace retrade;

namespace {

DaConfig small_config(std::uint64_t seed, int periods = 1, int steps = 60) {
    DaConfig cfg;
    cfg.periods = periods;
    cfg.steps_per_period = steps;
    cfg.grid_lo = Money{1};
    cfg.grid_hi = Money{10000};
    cfg.seed = seed;
    return cfg;
}

std::vector<double> prices_of(const TransactionLog& log) {
    std::vector<double> out;
    for (const LogEntry& e : log.entries) out.push_back(static_cast<double>(e.price.ticks));
    return out;
}

std::vector<double> last_period_prices(const TransactionLog& log, const DaConfig& cfg) {
    std::vector<double> out;
    std::int64_t start = static_cast<std::int64_t>(cfg.periods - 1) * cfg.steps_per_period;
    for (const LogEntry& e : log.entries)
        if (e.time >= start) out.push_back(static_cast<double>(e.price.ticks));
    return out;
}

}  // namespace

TEST_CASE("single profitable pair trades exactly once inside the band") {
    TraderPopulation pop{{Money{10}}, {Money{5}}};
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        TransactionLog log = run_da_session(small_config(seed), pop);
        REQUIRE(log.size() == 1);
        CHECK(log.entries[0].price >= Money{5});
        CHECK(log.entries[0].price <= Money{10});
    }
}

TEST_CASE("disjoint supports produce an empty log") {
    TraderPopulation pop{{Money{40}, Money{50}}, {Money{60}, Money{70}}};
    TransactionLog log = run_da_session(small_config(3), pop);
    CHECK(log.empty());
}

TEST_CASE("session configuration is validated") {
    TraderPopulation pop{{Money{10}}, {Money{5}}};
    CHECK_THROWS_AS(run_da_session(small_config(1), TraderPopulation{{Money{10}}, {}}),
                    NoTradersError);
    DaConfig bad_bounds = small_config(1);
    bad_bounds.grid_lo = Money{6};  // excludes the cost of 5
    CHECK_THROWS_AS(run_da_session(bad_bounds, pop), ConfigError);
    DaConfig few_steps = small_config(1);
    few_steps.steps_per_period = 1;
    CHECK_THROWS_AS(run_da_session(few_steps, pop), ConfigError);
}

TEST_CASE("identical seeds give bit-identical logs") {
    TraderPopulation pop = experiments::symmetric_6x6();
    DaConfig cfg = experiments::baseline_da(11);
    TransactionLog a = run_da_session(cfg, pop);
    TransactionLog b = run_da_session(cfg, pop);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.entries[i].time == b.entries[i].time);
        CHECK(a.entries[i].price == b.entries[i].price);
        CHECK(a.entries[i].buyer == b.entries[i].buyer);
        CHECK(a.entries[i].seller == b.entries[i].seller);
    }
}

TEST_CASE("no-loss: every contract lies between the pair's cost and value") {
    TraderPopulation pop = experiments::symmetric_6x6();
    const std::size_t nb = pop.values.size();
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        TransactionLog log = run_da_session(experiments::baseline_da(seed), pop);
        REQUIRE(!log.empty());
        for (const LogEntry& e : log.entries) {
            REQUIRE(e.buyer >= 0);
            REQUIRE(static_cast<std::size_t>(e.buyer) < nb);
            REQUIRE(static_cast<std::size_t>(e.seller) >= nb);
            Money value = pop.values[static_cast<std::size_t>(e.buyer)];
            Money cost = pop.costs[static_cast<std::size_t>(e.seller) - nb];
            CHECK(e.price <= value);
            CHECK(e.price >= cost);
        }
    }
}

TEST_CASE("baseline sessions converge to the equilibrium interval") {
    TraderPopulation pop = experiments::symmetric_6x6();
    PriceInterval eq = equilibrium_interval(pop);
    REQUIRE(eq.low == Money{970});
    REQUIRE(eq.high == Money{1030});

    int hits = 0;
    const int runs = 40;
    for (int seed = 1; seed <= runs; ++seed) {
        DaConfig cfg = experiments::baseline_da(static_cast<std::uint64_t>(seed));
        TransactionLog log = run_da_session(cfg, pop);
        std::vector<double> last = last_period_prices(log, cfg);
        REQUIRE(!last.empty());
        double m = mean(last);
        if (m >= static_cast<double>(eq.low.ticks) - 2.0 &&
            m <= static_cast<double>(eq.high.ticks) + 2.0)
            ++hits;
    }
    CHECK(hits >= 36);  // 90% in the quick check; acceptance runs the full 200
}

TEST_CASE("surplus trajectories are close to monotone under the baseline config") {
    TraderPopulation pop = experiments::symmetric_6x6();
    Money v_min = potential_surplus(equilibrium_interval(pop).low, pop);
    double total_violation = 0.0;
    int final_ok = 0;
    const int runs = 40;
    for (int seed = 1; seed <= runs; ++seed) {
        DaConfig cfg = experiments::baseline_da(static_cast<std::uint64_t>(seed) + 1000);
        TransactionLog log = run_da_session(cfg, pop);
        SurplusTrajectory st = surplus_trajectory(log, pop);
        total_violation += st.violation_fraction;
        std::vector<double> last = last_period_prices(log, cfg);
        double v_last = 0.0;
        for (double p : last)
            v_last += static_cast<double>(
                potential_surplus(Money{static_cast<std::int64_t>(p)}, pop).ticks);
        v_last /= static_cast<double>(last.size());
        if (v_last <= 1.10 * static_cast<double>(v_min.ticks)) ++final_ok;
    }
    CHECK(total_violation / runs <= 0.05);
    CHECK(final_ok >= 36);
}

TEST_CASE("zero cash endowment reduces the re-trade session to the baseline") {
    TraderPopulation pop = experiments::symmetric_6x6();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        DaConfig base = experiments::baseline_da(seed);
        base.periods = 1;  // durable units are not re-endowed, so compare one period
        RetradeConfig rt;
        rt.base = base;
        rt.cash_endowment = Money{0};
        rt.expectation_rule = experiments::retrade_trend();
        TransactionLog da = run_da_session(base, pop);
        TransactionLog re = run_retrade_session(rt, pop);
        REQUIRE(da.size() == re.size());
        for (std::size_t i = 0; i < da.size(); ++i) {
            CHECK(da.entries[i].time == re.entries[i].time);
            CHECK(da.entries[i].price == re.entries[i].price);
            CHECK(da.entries[i].buyer == re.entries[i].buyer);
            CHECK(da.entries[i].seller == re.entries[i].seller);
        }
    }
}

TEST_CASE("re-trade with zero trend weights settles like the baseline") {
    TraderPopulation pop = experiments::symmetric_6x6();
    double baseline_violation = 0.0, retrade_violation = 0.0;
    const int runs = 20;
    for (int seed = 1; seed <= runs; ++seed) {
        DaConfig cfg = experiments::baseline_da(static_cast<std::uint64_t>(seed) + 500);
        TransactionLog da = run_da_session(cfg, pop);
        baseline_violation += surplus_trajectory(da, pop).violation_fraction;

        RetradeConfig rt;
        rt.base = cfg;
        rt.cash_endowment = experiments::low_cash();
        rt.expectation_rule.weight_dists = {DistSpec::degenerate(0.0)};
        rt.expectation_rule.noise_scale = 0.0;
        TransactionLog re = run_retrade_session(rt, pop);
        retrade_violation += surplus_trajectory(re, pop).violation_fraction;
    }
    CHECK(retrade_violation / runs <= baseline_violation / runs + 0.05);
}

TEST_CASE("speculative cash destabilizes prices, more cash more variance") {
    TraderPopulation pop = experiments::symmetric_6x6();
    std::vector<double> var_none, var_low, var_high;
    const int runs = 40;
    for (int seed = 1; seed <= runs; ++seed) {
        std::uint64_t s = static_cast<std::uint64_t>(seed) + 9000;
        TransactionLog da = run_da_session(experiments::baseline_da(s), pop);
        var_none.push_back(variance(prices_of(da)));

        TransactionLog lo =
            run_retrade_session(experiments::retrade_treatment(experiments::low_cash(), s), pop);
        var_low.push_back(variance(prices_of(lo)));

        TransactionLog hi =
            run_retrade_session(experiments::retrade_treatment(experiments::high_cash(), s), pop);
        var_high.push_back(variance(prices_of(hi)));
    }
    double z1 = mann_whitney_z(var_none, var_low);
    double z2 = mann_whitney_z(var_low, var_high);
    CHECK(z1 > 2.33);  // one-sided p < 0.01
    CHECK(z2 > 2.33);
}
