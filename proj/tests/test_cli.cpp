#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "retrade/series_io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
};

const char* cli_path() { return std::getenv("RETRADE_CLI"); }

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(cli_path()) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("retrade_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli: equilibrium prints the interval and minimum surplus") {
    if (!cli_path()) SKIP("RETRADE_CLI not set");
    CliResult r = run_cli("equilibrium --values 10 --costs 5");
    CHECK(r.code == 0);
    CHECK(r.out.find("interval=[5,10]") != std::string::npos);
    CHECK(r.out.find("V=5") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 1") {
    if (!cli_path()) SKIP("RETRADE_CLI not set");
    CHECK(run_cli("no-such-subcommand").code == 1);
    CHECK(run_cli("equilibrium --values 10 --costs").code == 1);
}

TEST_CASE("cli: kesten pipeline recovers the inverse-cubic tail") {
    if (!cli_path()) SKIP("RETRADE_CLI not set");
    fs::path sim = fresh_dir("kesten_sim");
    CliResult r1 = run_cli("simulate-kesten --target-kappa 3 --steps 1000000 --seed 7 --out " +
                           sim.string());
    REQUIRE(r1.code == 0);
    REQUIRE(fs::exists(sim / "returns.csv"));

    fs::path ana = fresh_dir("kesten_ana");
    CliResult r2 = run_cli("analyze-tails --input " + (sim / "returns.csv").string() + " --out " +
                           ana.string());
    REQUIRE(r2.code == 0);
    auto summary = nlohmann::json::parse(slurp(ana / "summary.json"));
    double alpha = summary["fit"]["alpha"].get<double>();
    CHECK(alpha > 2.7);
    CHECK(alpha < 3.3);
    double oracle = nlohmann::json::parse(slurp(sim / "summary.json"))["oracle_kappa"].get<double>();
    CHECK(oracle == Catch::Approx(3.0).margin(1e-3));
}

TEST_CASE("cli: constant series is a data error with ZeroVariance") {
    if (!cli_path()) SKIP("RETRADE_CLI not set");
    fs::path dir = fresh_dir("flat");
    std::ofstream f(dir / "flat.csv");
    f << "t,price\n";
    for (int t = 0; t < 2000; ++t) f << t << ",100\n";
    f.close();
    CliResult r = run_cli("analyze-acf --input " + (dir / "flat.csv").string() + " --out " +
                          (dir / "out").string());
    CHECK(r.code == 2);
    CHECK(r.out.find("zero variance") != std::string::npos);
}

TEST_CASE("cli: schema violations are data errors naming the line") {
    if (!cli_path()) SKIP("RETRADE_CLI not set");
    fs::path dir = fresh_dir("schema");
    std::ofstream f(dir / "bad.csv");
    f << "t,price\n1,100\n1,101\n";
    f.close();
    CliResult r = run_cli("analyze-tails --input " + (dir / "bad.csv").string() + " --out " +
                          (dir / "out").string());
    CHECK(r.code == 2);
    CHECK(r.out.find("line 3") != std::string::npos);
}

TEST_CASE("cli: identical seeds give byte-identical outputs") {
    if (!cli_path()) SKIP("RETRADE_CLI not set");
    fs::path a = fresh_dir("repro_a"), b = fresh_dir("repro_b");
    REQUIRE(run_cli("simulate-da --seed 42 --out " + a.string()).code == 0);
    REQUIRE(run_cli("simulate-da --seed 42 --out " + b.string()).code == 0);
    for (const char* name : {"contracts.csv", "prices.csv", "trajectory.csv", "summary.json"})
        CHECK(slurp(a / name) == slurp(b / name));

    fs::path c = fresh_dir("repro_c");
    REQUIRE(run_cli("simulate-spec --steps 5000 --seed 9 --out " + c.string()).code == 0);
    fs::path d = fresh_dir("repro_d");
    REQUIRE(run_cli("simulate-spec --steps 5000 --seed 9 --out " + d.string()).code == 0);
    CHECK(slurp(c / "returns.csv") == slurp(d / "returns.csv"));
}

TEST_CASE("cli: emitted series re-ingest to the identical sequence") {
    if (!cli_path()) SKIP("RETRADE_CLI not set");
    fs::path dir = fresh_dir("roundtrip");
    REQUIRE(run_cli("simulate-spec --steps 2000 --seed 3 --out " + dir.string()).code == 0);
    retrade::SeriesData s = retrade::load_series((dir / "returns.csv").string());
    CHECK(s.kind == retrade::SeriesData::Kind::ret);
    CHECK(s.x.size() == 2000);
    // serialize again: bytes must match the file the CLI wrote
    std::string text = slurp(dir / "returns.csv");
    retrade::SeriesData again = retrade::load_series_text(text);
    CHECK(again.x == s.x);
    CHECK(again.t == s.t);
}

TEST_CASE("cli: noarb assert mode distinguishes martingale from drift") {
    if (!cli_path()) SKIP("RETRADE_CLI not set");
    fs::path ok = fresh_dir("noarb_ok");
    CliResult pass = run_cli("noarb-check --paths 20000 --seed 5 --assert --out " + ok.string());
    CHECK(pass.code == 0);
    CHECK(pass.out.find("pass=true") != std::string::npos);

    fs::path bad = fresh_dir("noarb_bad");
    CliResult fail = run_cli("noarb-check --paths 20000 --seed 5 --drift-q 0.6 --assert --out " +
                             bad.string());
    CHECK(fail.code == 3);
    CHECK(fail.out.find("pass=false") != std::string::npos);
}

TEST_CASE("cli: config file plus flag overrides round-trip") {
    if (!cli_path()) SKIP("RETRADE_CLI not set");
    fs::path dir = fresh_dir("config");
    std::ofstream f(dir / "exp.config");
    f << "steps = 3000\nseed = 11\nagents = 31\n";
    f.close();
    fs::path out1 = dir / "run1";
    REQUIRE(run_cli("simulate-spec --config " + (dir / "exp.config").string() + " --out " +
                    out1.string())
                .code == 0);
    // rerun from the emitted effective config: must be byte-identical
    fs::path out2 = dir / "run2";
    REQUIRE(run_cli("simulate-spec --config " + (out1 / "effective.config").string() + " --out " +
                    out2.string())
                .code == 0);
    CHECK(slurp(out1 / "returns.csv") == slurp(out2 / "returns.csv"));
}
