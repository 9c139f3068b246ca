// retrade: command-line front end for the market-simulation and
// heavy-tail-statistics workbench.
//
// Subcommands: equilibrium, simulate-da, simulate-retrade, simulate-kesten,
// simulate-spec, analyze-tails, analyze-acf, noarb-check, jensen-check.
// Exit codes: 0 success, 1 usage error, 2 data error, 3 failed --assert check.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "retrade/experiments.hpp"
#include "retrade/retrade.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace retrade;

namespace {

struct AssertFailed {
    std::string what;
};

// ---------------------------------------------------------------------------
// small helpers

std::string default_out_dir() {
    const char* env = std::getenv("RETRADE_OUTPUT_DIR");
    return env && *env ? env : ".";
}

// "family(a,b[,p])", e.g. normal(0,0.85), uniform(-1,1), two_point(-2,2,0.5),
// degenerate(0.4)
DistSpec parse_dist(const std::string& text) {
    auto open = text.find('(');
    if (open == std::string::npos || text.back() != ')')
        throw SchemaError("distribution must look like family(args): " + text);
    std::string family = text.substr(0, open);
    std::string args = text.substr(open + 1, text.size() - open - 2);
    std::vector<double> vals;
    std::size_t pos = 0;
    while (pos <= args.size() && !args.empty()) {
        auto comma = args.find(',', pos);
        std::string tok = args.substr(pos, comma == std::string::npos ? comma : comma - pos);
        vals.push_back(parse_double(tok, 1));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    DistSpec d;
    if (family == "degenerate" && vals.size() == 1)
        d = DistSpec::degenerate(vals[0]);
    else if (family == "normal" && vals.size() == 2)
        d = DistSpec::normal(vals[0], vals[1]);
    else if (family == "uniform" && vals.size() == 2)
        d = DistSpec::uniform(vals[0], vals[1]);
    else if (family == "two_point" && (vals.size() == 2 || vals.size() == 3))
        d = DistSpec::two_point(vals[0], vals[1], vals.size() == 3 ? vals[2] : 0.5);
    else
        throw SchemaError("unknown distribution or wrong arity: " + text);
    d.validate();
    return d;
}

std::vector<Money> parse_money_list(const std::string& csv) {
    std::vector<Money> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        auto comma = csv.find(',', pos);
        std::string tok = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        out.push_back(Money{parse_int(tok, 1)});
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::string money_list_str(const std::vector<Money>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i].ticks);
    }
    return out;
}

// Effective configuration: defaults, overlaid by --config file, overlaid by
// explicitly passed flags. Everything downstream reads from this one map, so
// a saved effective.config reproduces the run exactly.
class Effective {
public:
    Effective(const CLI::App* cmd, const std::string& config_path, KvConfig defaults)
        : cfg_(std::move(defaults)) {
        if (!config_path.empty()) {
            KvConfig file = KvConfig::load(config_path);
            for (const auto& [k, v] : file.entries()) cfg_.set(k, v);
        }
        for (const CLI::Option* opt : cmd->get_options()) {
            if (opt->count() == 0 || opt->get_lnames().empty()) continue;
            std::string name = opt->get_lnames().front();
            if (name == "config" || name == "assert") continue;
            if (opt->get_expected_min() == 0)
                cfg_.set(name, "true");  // plain flag
            else
                cfg_.set(name, opt->results().front());
        }
    }

    const KvConfig& kv() const { return cfg_; }
    std::string str(const std::string& k) const { return cfg_.get_str(k, ""); }
    double num(const std::string& k) const { return cfg_.get_double(k, 0.0); }
    std::int64_t integer(const std::string& k) const { return cfg_.get_int(k, 0); }
    bool flag(const std::string& k) const { return cfg_.get_bool(k, false); }

    Provenance provenance(const std::string& subcommand) const {
        // hash identifies the experiment; the output location is not part of it
        return {subcommand, cfg_.without("out").hash_hex(),
                static_cast<std::uint64_t>(cfg_.get_int("seed", 0))};
    }

private:
    KvConfig cfg_;
};

class OutputDir {
public:
    OutputDir(const Effective& eff, const std::string& subcommand)
        : dir_(eff.str("out")), prov_(eff.provenance(subcommand)) {
        fs::create_directories(dir_);
        write_file((fs::path(dir_) / "effective.config").string(),
                   "# retrade " + std::string(kVersion) + " effective config\n" +
                       eff.kv().serialize());
    }

    const Provenance& provenance() const { return prov_; }

    void table(const std::string& name, const TableBuilder& tb) const {
        write_file((fs::path(dir_) / name).string(), tb.str());
    }
    void series(const std::string& name, const SeriesData& s) const {
        save_series((fs::path(dir_) / name).string(), s, prov_);
    }
    void summary(const json& j) const {
        write_file((fs::path(dir_) / "summary.json").string(), j.dump(2) + "\n");
    }

private:
    std::string dir_;
    Provenance prov_;
};

json interval_json(const PriceInterval& iv) {
    return {{"low", iv.low.ticks}, {"high", iv.high.ticks}, {"midpoint", iv.midpoint().ticks}};
}

TraderPopulation population_from(const Effective& eff) {
    TraderPopulation pop;
    pop.values = parse_money_list(eff.str("values"));
    pop.costs = parse_money_list(eff.str("costs"));
    return pop;
}

DaConfig da_config_from(const Effective& eff) {
    DaConfig cfg;
    cfg.periods = static_cast<int>(eff.integer("periods"));
    cfg.steps_per_period = static_cast<int>(eff.integer("steps"));
    cfg.tick = Money{eff.integer("tick")};
    cfg.grid_lo = Money{eff.integer("grid-lo")};
    cfg.grid_hi = Money{eff.integer("grid-hi")};
    cfg.improvement_rule = eff.kv().get_bool("improvement-rule", true);
    cfg.initial_shade = eff.num("initial-shade");
    cfg.anchor_shade = eff.num("anchor-shade");
    cfg.anchor_cross = eff.num("anchor-cross");
    cfg.seed = static_cast<std::uint64_t>(eff.integer("seed"));
    return cfg;
}

KvConfig da_defaults() {
    KvConfig kv;
    TraderPopulation pop = experiments::symmetric_6x6();
    DaConfig cfg = experiments::baseline_da(1);
    kv.set("values", money_list_str(pop.values));
    kv.set("costs", money_list_str(pop.costs));
    kv.set("periods", std::to_string(cfg.periods));
    kv.set("steps", std::to_string(cfg.steps_per_period));
    kv.set("tick", std::to_string(cfg.tick.ticks));
    kv.set("grid-lo", std::to_string(cfg.grid_lo.ticks));
    kv.set("grid-hi", std::to_string(cfg.grid_hi.ticks));
    kv.set("initial-shade", format_double(cfg.initial_shade));
    kv.set("anchor-shade", format_double(cfg.anchor_shade));
    kv.set("anchor-cross", format_double(cfg.anchor_cross));
    kv.set("seed", "1");
    kv.set("out", default_out_dir());
    return kv;
}

void emit_session_tables(const OutputDir& out, const TransactionLog& log,
                         const TraderPopulation& pop) {
    TableBuilder contracts(out.provenance());
    contracts.header("t,price,buyer,seller");
    for (const LogEntry& e : log.entries)
        contracts.raw_row(std::to_string(e.time) + "," + std::to_string(e.price.ticks) + "," +
                          std::to_string(e.buyer) + "," + std::to_string(e.seller));
    out.table("contracts.csv", contracts);

    SeriesData prices;
    prices.kind = SeriesData::Kind::price;
    for (const LogEntry& e : log.entries) {
        prices.t.push_back(e.time);
        prices.x.push_back(static_cast<double>(e.price.ticks));
    }
    out.series("prices.csv", prices);

    if (!log.empty()) {
        SurplusTrajectory st = surplus_trajectory(log, pop);
        TableBuilder traj(out.provenance());
        traj.header("t,price,surplus,violation");
        for (std::size_t i = 0; i < log.size(); ++i)
            traj.raw_row(std::to_string(log.entries[i].time) + "," +
                         std::to_string(log.entries[i].price.ticks) + "," +
                         std::to_string(st.surplus[i].ticks) + "," +
                         (st.violation[i] ? "1" : "0"));
        out.table("trajectory.csv", traj);
    }
}

json session_summary(const TransactionLog& log, const TraderPopulation& pop) {
    json j;
    j["contracts"] = log.size();
    j["equilibrium"] = interval_json(equilibrium_interval(pop));
    j["max_extractable_surplus"] = max_extractable_surplus(pop).ticks;
    if (!log.empty()) {
        SurplusTrajectory st = surplus_trajectory(log, pop);
        j["violation_fraction"] = st.violation_fraction;
        j["final_surplus"] = st.surplus.back().ticks;
        std::vector<double> prices;
        for (const LogEntry& e : log.entries)
            prices.push_back(static_cast<double>(e.price.ticks));
        j["mean_price"] = mean(prices);
        j["price_variance"] = variance(prices);
    }
    return j;
}

// ---------------------------------------------------------------------------
// subcommand handlers

int cmd_equilibrium(const Effective& eff) {
    TraderPopulation pop = population_from(eff);
    PriceInterval iv = eff.kv().has("grid-lo") && eff.kv().has("grid-hi")
                           ? equilibrium_interval(
                                 pop, {Money{eff.integer("grid-lo")}, Money{eff.integer("grid-hi")}})
                           : equilibrium_interval(pop);
    Money v = potential_surplus(iv.low, pop);
    std::cout << "interval=[" << iv.low.ticks << "," << iv.high.ticks << "]"
              << " midpoint=" << iv.midpoint().ticks << " V=" << v.ticks << "\n";
    return 0;
}

int cmd_simulate_da(const Effective& eff) {
    TraderPopulation pop = population_from(eff);
    DaConfig cfg = da_config_from(eff);
    TransactionLog log = run_da_session(cfg, pop);
    OutputDir out(eff, "simulate-da");
    emit_session_tables(out, log, pop);
    json j = session_summary(log, pop);
    if (!log.empty()) {
        const std::size_t nb = pop.values.size();
        Money realized = realized_surplus(
            log, [&](int id) { return pop.values[static_cast<std::size_t>(id)]; },
            [&](int id) { return pop.costs[static_cast<std::size_t>(id) - nb]; });
        double denom = static_cast<double>(max_extractable_surplus(pop).ticks) * cfg.periods;
        j["efficiency"] = denom > 0.0 ? static_cast<double>(realized.ticks) / denom : 0.0;
    }
    out.summary(j);
    return 0;
}

int cmd_simulate_retrade(const Effective& eff) {
    TraderPopulation pop = population_from(eff);
    RetradeConfig cfg;
    cfg.base = da_config_from(eff);
    cfg.cash_endowment = Money{eff.integer("cash")};
    cfg.expectation_rule.weight_dists.clear();
    for (std::int64_t h = 0; h < eff.integer("trend-lags"); ++h)
        cfg.expectation_rule.weight_dists.push_back(parse_dist(eff.str("trend-weight")));
    cfg.expectation_rule.noise_scale = eff.num("expectation-noise");
    cfg.spec_shade = eff.num("spec-shade");
    TransactionLog log = run_retrade_session(cfg, pop);
    OutputDir out(eff, "simulate-retrade");
    emit_session_tables(out, log, pop);
    json j = session_summary(log, pop);
    j["cash_endowment"] = cfg.cash_endowment.ticks;
    out.summary(j);
    return 0;
}

int cmd_simulate_kesten(const Effective& eff) {
    KestenParams params;
    params.steps = static_cast<std::size_t>(eff.integer("steps"));
    params.seed = static_cast<std::uint64_t>(eff.integer("seed"));
    params.burn_in_multiple = static_cast<std::size_t>(eff.integer("burn-mult"));
    params.shock_dist = parse_dist(eff.str("shock"));
    double target_kappa = eff.num("target-kappa");
    std::string coef = eff.str("coef");
    std::int64_t lags = eff.integer("lags");
    for (std::int64_t h = 0; h < lags; ++h) {
        if (target_kappa > 0.0)
            params.coef_dists.push_back(
                DistSpec::normal(0.0, normal_scale_for_tail_index(target_kappa)));
        else
            params.coef_dists.push_back(parse_dist(coef));
    }
    ReturnSeries series = simulate_kesten(params);

    OutputDir out(eff, "simulate-kesten");
    SeriesData s;
    s.kind = SeriesData::Kind::ret;
    for (std::size_t t = 0; t < series.returns.size(); ++t) {
        s.t.push_back(static_cast<std::int64_t>(t));
        s.x.push_back(series.returns[t]);
    }
    out.series("returns.csv", s);

    json j;
    j["steps"] = params.steps;
    j["lags"] = params.coef_dists.size();
    j["coef"] = params.coef_dists.front().describe();
    j["shock"] = params.shock_dist.describe();
    if (params.coef_dists.size() == 1) {
        try {
            j["oracle_kappa"] = tail_exponent_oracle(params.coef_dists.front());
        } catch (const Error& e) {
            j["oracle_kappa_error"] = e.what();
        }
    }
    out.summary(j);
    return 0;
}

int cmd_simulate_spec(const Effective& eff) {
    TrendRule rule;
    for (std::int64_t h = 0; h < eff.integer("lags"); ++h)
        rule.weight_dists.push_back(parse_dist(eff.str("weight")));
    rule.noise_scale = eff.num("noise");
    std::optional<NewsProcess> news;
    if (!eff.flag("news-off")) {
        NewsProcess n;
        n.stay_calm = eff.num("stay-calm");
        n.stay_turbulent = eff.num("stay-turbulent");
        n.calm_scale = eff.num("calm-scale");
        n.turbulent_scale = eff.num("turbulent-scale");
        news = n;
    }
    MarketRun run = simulate_speculative_market(
        rule, news, static_cast<std::size_t>(eff.integer("agents")),
        static_cast<std::size_t>(eff.integer("steps")),
        static_cast<std::uint64_t>(eff.integer("seed")), eff.num("p0"));

    OutputDir out(eff, "simulate-spec");
    SeriesData rets;
    rets.kind = SeriesData::Kind::ret;
    for (std::size_t t = 0; t < run.series.returns.size(); ++t) {
        rets.t.push_back(static_cast<std::int64_t>(t));
        rets.x.push_back(run.series.returns[t]);
    }
    out.series("returns.csv", rets);
    SeriesData prices;
    prices.kind = SeriesData::Kind::price;
    const auto& p = *run.series.prices;
    for (std::size_t t = 0; t < p.size(); ++t) {
        prices.t.push_back(static_cast<std::int64_t>(t));
        prices.x.push_back(p[t]);
    }
    out.series("prices.csv", prices);

    json j;
    j["agents"] = eff.integer("agents");
    j["steps"] = run.series.returns.size();
    j["news"] = !eff.flag("news-off");
    j["floor_hits"] = run.floor_hits;
    out.summary(j);
    return 0;
}

std::vector<double> load_returns(const Effective& eff) {
    SeriesData data = load_series(eff.str("input"));
    if (data.kind == SeriesData::Kind::ret) return data.x;
    return returns_from_prices(data.x);
}

int cmd_analyze_tails(const Effective& eff) {
    std::vector<double> returns = load_returns(eff);
    OutputDir out(eff, "analyze-tails");

    CcdfCurve curve = ccdf(returns);
    TableBuilder tb(out.provenance());
    tb.header("magnitude,survival");
    for (std::size_t i = 0; i < curve.magnitude.size(); ++i)
        tb.raw_row(format_double(curve.magnitude[i]) + "," + format_double(curve.survival[i]));
    out.table("ccdf.csv", tb);

    json j;
    j["n"] = returns.size();
    std::size_t k = eff.integer("k") > 0 ? static_cast<std::size_t>(eff.integer("k"))
                                         : hill_default_k(returns.size());
    HillEstimate h = hill(returns, k);
    j["hill"] = {{"alpha", h.alpha}, {"stderr", h.stderr_}, {"k", k}};
    HillProfile prof = hill_profile(returns, k);
    j["hill_stable"] = prof.stable;
    if (returns.size() >= 100) {
        TailFit fit = fit_powerlaw(returns);
        j["fit"] = {{"alpha", fit.alpha},
                    {"xmin", fit.xmin},
                    {"ks", fit.ks_stat},
                    {"n_tail", fit.n_tail},
                    {"stderr", fit.stderr_}};
        j["poor_fit"] = poor_fit(fit, returns.size());
        j["infinite_variance_warning"] = fit.alpha <= 2.0;
    }
    out.summary(j);
    return 0;
}

int cmd_analyze_acf(const Effective& eff) {
    std::vector<double> returns = load_returns(eff);
    std::size_t max_lag = static_cast<std::size_t>(eff.integer("max-lag"));
    AcfReport rep = acf(returns, max_lag);
    // footnote caveat: the ACF is ill-defined under infinite variance
    try {
        if (returns.size() >= 100 && fit_powerlaw(returns).alpha <= 2.0)
            rep.infinite_variance_warning = true;
    } catch (const Error&) {
        // tail not estimable; leave the flag unset
    }

    OutputDir out(eff, "analyze-acf");
    TableBuilder tb(out.provenance());
    tb.header("lag,raw,abs,band");
    for (std::size_t lag = 1; lag <= max_lag; ++lag)
        tb.raw_row(std::to_string(lag) + "," + format_double(rep.raw[lag - 1]) + "," +
                   format_double(rep.abs[lag - 1]) + "," + format_double(rep.band));
    out.table("acf.csv", tb);

    int raw_inside = 0, abs_above = 0;
    for (double r : rep.raw) raw_inside += std::abs(r) <= rep.band ? 1 : 0;
    for (double r : rep.abs) abs_above += r > rep.band ? 1 : 0;
    json j;
    j["t"] = returns.size();
    j["max_lag"] = max_lag;
    j["band"] = rep.band;
    j["raw_inside_band"] = raw_inside;
    j["abs_above_band"] = abs_above;
    j["abs_degenerate"] = rep.abs_degenerate;
    j["infinite_variance_warning"] = rep.infinite_variance_warning;
    out.summary(j);
    return 0;
}

MarketSpec market_spec_from(const Effective& eff) {
    MarketSpec spec;
    std::string model = eff.str("model");
    if (model == "tree")
        spec.kind = MarketSpec::Kind::binomial_tree;
    else if (model == "iid")
        spec.kind = MarketSpec::Kind::iid_dividend;
    else if (model == "terminal")
        spec.kind = MarketSpec::Kind::terminal_payoff;
    else
        throw SchemaError("model must be tree, iid, or terminal: " + model);
    spec.periods = static_cast<int>(eff.integer("periods"));
    spec.pricing_buffer = static_cast<int>(eff.integer("buffer"));
    spec.beta = eff.num("beta");
    spec.d0 = eff.num("d0");
    spec.up = eff.num("up");
    spec.down = eff.num("down");
    spec.sim_up_prob = eff.num("drift-q");
    spec.d_lo = eff.num("d-lo");
    spec.d_hi = eff.num("d-hi");
    spec.p_hi = eff.num("p-hi");
    spec.terminal_value = eff.num("terminal-value");
    return spec;
}

std::unique_ptr<TradingStrategy> strategy_from(const Effective& eff) {
    std::string name = eff.str("strategy");
    if (name == "hold") return std::make_unique<BuyAndHoldStrategy>(eff.num("h0"));
    if (name == "momentum")
        return std::make_unique<MomentumStrategy>(eff.num("h0"), eff.num("step"),
                                                  eff.num("min-holdings"));
    throw SchemaError("strategy must be hold or momentum: " + name);
}

int cmd_noarb_check(const Effective& eff, bool assert_mode) {
    MarketSpec spec = market_spec_from(eff);
    std::unique_ptr<TradingStrategy> strategy = strategy_from(eff);
    NoRetradeReport rep = test_no_retrade_advantage(
        spec, *strategy, static_cast<std::size_t>(eff.integer("paths")),
        static_cast<std::uint64_t>(eff.integer("seed")),
        static_cast<std::size_t>(eff.integer("assets")));

    OutputDir out(eff, "noarb-check");
    TableBuilder tb(out.provenance());
    tb.header("t,mean,stderr,z");
    for (std::size_t t = 0; t < rep.mean_t.size(); ++t)
        tb.raw_row(std::to_string(t + 1) + "," + format_double(rep.mean_t[t]) + "," +
                   format_double(rep.stderr_t[t]) + "," + format_double(rep.z_t[t]));
    out.table("advantage.csv", tb);

    json j;
    j["paths"] = rep.n_paths;
    j["pooled_mean"] = rep.pooled_mean;
    j["pooled_stderr"] = rep.pooled_stderr;
    j["pooled_z"] = rep.pooled_z;
    j["pass"] = rep.pass;
    out.summary(j);
    std::cout << "noarb-check: pooled_z=" << format_double(rep.pooled_z)
              << " pass=" << (rep.pass ? "true" : "false") << "\n";
    if (assert_mode && !rep.pass) throw AssertFailed{"no-re-trade check failed"};
    return 0;
}

int cmd_jensen_check(const Effective& eff, bool assert_mode) {
    MarketSpec spec = market_spec_from(eff);
    std::unique_ptr<TradingStrategy> strategy = strategy_from(eff);
    UtilitySpec utility;
    std::string name = eff.str("utility");
    if (name == "linear")
        utility = {UtilitySpec::Family::linear, 0.0};
    else if (name == "log")
        utility = {UtilitySpec::Family::log_u, 0.0};
    else if (name == "power")
        utility = {UtilitySpec::Family::power, eff.num("utility-param")};
    else if (name == "exp")
        utility = {UtilitySpec::Family::exponential, eff.num("utility-param")};
    else
        throw SchemaError("utility must be linear, log, power, or exp: " + name);

    JensenReport rep = jensen_check(utility, spec, *strategy,
                                    static_cast<std::size_t>(eff.integer("paths")),
                                    static_cast<std::uint64_t>(eff.integer("seed")),
                                    static_cast<std::size_t>(eff.integer("assets")));
    OutputDir out(eff, "jensen-check");
    json j;
    j["paths"] = rep.n_paths;
    j["eu_trade"] = rep.eu_trade;
    j["eu_hold"] = rep.eu_hold;
    j["diff_mean"] = rep.diff_mean;
    j["diff_stderr"] = rep.diff_stderr;
    j["pass"] = rep.pass;
    out.summary(j);
    std::cout << "jensen-check: diff=" << format_double(rep.diff_mean)
              << " stderr=" << format_double(rep.diff_stderr)
              << " pass=" << (rep.pass ? "true" : "false") << "\n";
    if (assert_mode && !rep.pass) throw AssertFailed{"jensen check failed"};
    return 0;
}

KvConfig noarb_defaults() {
    KvConfig kv;
    MarketSpec tree = experiments::martingale_tree();
    kv.set("model", "tree");
    kv.set("periods", std::to_string(tree.periods));
    kv.set("buffer", std::to_string(tree.pricing_buffer));
    kv.set("beta", format_double(tree.beta));
    kv.set("d0", format_double(tree.d0));
    kv.set("up", format_double(tree.up));
    kv.set("down", format_double(tree.down));
    kv.set("drift-q", format_double(tree.sim_up_prob));
    kv.set("d-lo", "0");
    kv.set("d-hi", "2");
    kv.set("p-hi", "0.5");
    kv.set("terminal-value", "0");
    kv.set("strategy", "momentum");
    kv.set("h0", "10");
    kv.set("step", "1");
    kv.set("min-holdings", "0");
    kv.set("assets", "1");
    kv.set("paths", "100000");
    kv.set("seed", "1");
    kv.set("out", default_out_dir());
    return kv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"market simulation and heavy-tail statistics workbench"};
    app.require_subcommand(1);

    std::function<int()> action;
    std::string config_path;
    bool assert_mode = false;

    auto add_common = [&](CLI::App* cmd, const char* opts) {
        cmd->add_option("--config", config_path, "key = value configuration file");
        std::string all(opts);
        std::size_t pos = 0;
        while (pos < all.size()) {
            auto space = all.find(' ', pos);
            std::string name = all.substr(pos, space == std::string::npos ? space : space - pos);
            cmd->add_option("--" + name, "");
            if (space == std::string::npos) break;
            pos = space + 1;
        }
        return cmd;
    };

    // equilibrium
    {
        CLI::App* cmd = add_common(app.add_subcommand("equilibrium",
                                                      "competitive equilibrium interval and V"),
                                   "values costs grid-lo grid-hi seed");
        cmd->callback([&, cmd] {
            action = [&, cmd] {
                KvConfig defaults;
                defaults.set("values", "10");
                defaults.set("costs", "5");
                defaults.set("seed", "0");
                return cmd_equilibrium(Effective(cmd, config_path, defaults));
            };
        });
    }
    // simulate-da
    {
        CLI::App* cmd = add_common(
            app.add_subcommand("simulate-da", "perishable-good double-auction session"),
            "values costs periods steps tick grid-lo grid-hi initial-shade anchor-shade "
            "anchor-cross improvement-rule seed out");
        cmd->callback([&, cmd] {
            action = [&, cmd] {
                return cmd_simulate_da(Effective(cmd, config_path, da_defaults()));
            };
        });
    }
    // simulate-retrade
    {
        CLI::App* cmd = add_common(
            app.add_subcommand("simulate-retrade", "re-tradable-asset double-auction session"),
            "values costs periods steps tick grid-lo grid-hi initial-shade anchor-shade "
            "anchor-cross improvement-rule cash trend-lags trend-weight expectation-noise "
            "spec-shade seed out");
        cmd->callback([&, cmd] {
            action = [&, cmd] {
                KvConfig kv = da_defaults();
                kv.set("cash", std::to_string(experiments::low_cash().ticks));
                kv.set("trend-lags", "1");
                kv.set("trend-weight", "normal(0.4,0.2)");
                kv.set("expectation-noise", "0.01");
                kv.set("spec-shade", "0.02");
                return cmd_simulate_retrade(Effective(cmd, config_path, kv));
            };
        });
    }
    // simulate-kesten
    {
        CLI::App* cmd = add_common(
            app.add_subcommand("simulate-kesten", "random-coefficient autoregression"),
            "steps lags coef shock target-kappa burn-mult seed out");
        cmd->callback([&, cmd] {
            action = [&, cmd] {
                KvConfig kv;
                kv.set("steps", "100000");
                kv.set("lags", "1");
                kv.set("coef", "normal(0,0.5)");
                kv.set("shock", "normal(0,1)");
                kv.set("target-kappa", "0");
                kv.set("burn-mult", "10");
                kv.set("seed", "1");
                kv.set("out", default_out_dir());
                return cmd_simulate_kesten(Effective(cmd, config_path, kv));
            };
        });
    }
    // simulate-spec
    {
        CLI::App* cmd = add_common(
            app.add_subcommand("simulate-spec", "trend-following speculative market"),
            "agents steps lags weight noise p0 news-off stay-calm stay-turbulent calm-scale "
            "turbulent-scale seed out");
        cmd->callback([&, cmd] {
            action = [&, cmd] {
                KvConfig kv;
                TrendRule rule = experiments::clustering_trend();
                NewsProcess news = experiments::sticky_news();
                kv.set("agents", "101");
                kv.set("steps", "100000");
                kv.set("lags", "1");
                kv.set("weight", rule.weight_dists.front().describe());
                kv.set("noise", format_double(rule.noise_scale));
                kv.set("p0", "100");
                kv.set("news-off", "false");
                kv.set("stay-calm", format_double(news.stay_calm));
                kv.set("stay-turbulent", format_double(news.stay_turbulent));
                kv.set("calm-scale", format_double(news.calm_scale));
                kv.set("turbulent-scale", format_double(news.turbulent_scale));
                kv.set("seed", "1");
                kv.set("out", default_out_dir());
                return cmd_simulate_spec(Effective(cmd, config_path, kv));
            };
        });
    }
    // analyze-tails
    {
        CLI::App* cmd = add_common(
            app.add_subcommand("analyze-tails", "CCDF, Hill estimate, and power-law fit"),
            "input k seed out");
        cmd->callback([&, cmd] {
            action = [&, cmd] {
                KvConfig kv;
                kv.set("input", "");
                kv.set("k", "0");
                kv.set("seed", "0");
                kv.set("out", default_out_dir());
                return cmd_analyze_tails(Effective(cmd, config_path, kv));
            };
        });
    }
    // analyze-acf
    {
        CLI::App* cmd = add_common(
            app.add_subcommand("analyze-acf", "raw and absolute-return autocorrelation"),
            "input max-lag seed out");
        cmd->callback([&, cmd] {
            action = [&, cmd] {
                KvConfig kv;
                kv.set("input", "");
                kv.set("max-lag", "50");
                kv.set("seed", "0");
                kv.set("out", default_out_dir());
                return cmd_analyze_acf(Effective(cmd, config_path, kv));
            };
        });
    }
    // noarb-check
    {
        CLI::App* cmd = add_common(
            app.add_subcommand("noarb-check", "Monte Carlo no-re-trade-advantage test"),
            "model periods buffer beta d0 up down drift-q d-lo d-hi p-hi terminal-value "
            "strategy h0 step min-holdings assets paths seed out");
        cmd->add_flag("--assert", assert_mode, "exit 3 when the check fails");
        cmd->callback([&, cmd] {
            action = [&, cmd] {
                return cmd_noarb_check(Effective(cmd, config_path, noarb_defaults()),
                                       assert_mode);
            };
        });
    }
    // jensen-check
    {
        CLI::App* cmd = add_common(
            app.add_subcommand("jensen-check", "Jensen no-trade utility comparison"),
            "model periods buffer beta d0 up down drift-q d-lo d-hi p-hi terminal-value "
            "strategy h0 step min-holdings assets paths utility utility-param seed out");
        cmd->add_flag("--assert", assert_mode, "exit 3 when the check fails");
        cmd->callback([&, cmd] {
            action = [&, cmd] {
                KvConfig kv = noarb_defaults();
                kv.set("utility", "power");
                kv.set("utility-param", "3");
                return cmd_jensen_check(Effective(cmd, config_path, kv), assert_mode);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return action();
    } catch (const AssertFailed& e) {
        std::cerr << "retrade: " << e.what << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "retrade: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "retrade: " << e.what() << "\n";
        return 2;
    }
}
