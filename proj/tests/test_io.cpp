#include <catch2/catch_amalgamated.hpp>

#include "retrade/config.hpp"
#include "retrade/rng.hpp"
#include "retrade/series_io.hpp"

using namespace retrade;

TEST_CASE("config parses, overrides, and serializes canonically") {
    KvConfig cfg = KvConfig::parse(
        "# experiment\n"
        "da.periods = 5\n"
        "da.steps = 600\n"
        "seed = 42\n"
        "\n"
        "news.calm-scale = 0.005\n");
    CHECK(cfg.get_int("da.periods", 0) == 5);
    CHECK(cfg.get_int("seed", 0) == 42);
    CHECK(cfg.get_double("news.calm-scale", 0.0) == 0.005);
    CHECK(cfg.get_int("missing", 7) == 7);

    KvConfig again = KvConfig::parse(cfg.serialize());
    CHECK(again.serialize() == cfg.serialize());
    CHECK(again.hash_hex() == cfg.hash_hex());

    again.set("seed", "43");
    CHECK(again.hash_hex() != cfg.hash_hex());
}

TEST_CASE("config rejects malformed input with line numbers") {
    try {
        KvConfig::parse("a = 1\nnot a kv line\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(KvConfig::parse("bad key! = 3\n"), ParseError);
    KvConfig cfg = KvConfig::parse("x = abc\n");
    CHECK_THROWS_AS(cfg.get_int("x", 0), SchemaError);
    CHECK_THROWS_AS(cfg.get_double("x", 0.0), SchemaError);
}

TEST_CASE("series files round-trip bit-exactly") {
    SeriesData s;
    s.kind = SeriesData::Kind::ret;
    Rng rng(3);
    for (int t = 0; t < 500; ++t) {
        s.t.push_back(t);
        s.x.push_back(rng.normal() * 1e-3);
    }
    Provenance prov{"unit-test", "deadbeef", 3};
    std::string text = serialize_series(s, prov);
    SeriesData back = load_series_text(text);
    REQUIRE(back.kind == SeriesData::Kind::ret);
    CHECK(back.t == s.t);
    CHECK(back.x == s.x);  // exact doubles, not approximate
}

TEST_CASE("series files: worked examples") {
    SeriesData prices = load_series_text("t,price\n1,100\n2,110\n");
    REQUIRE(prices.kind == SeriesData::Kind::price);
    REQUIRE(prices.x.size() == 2);
    CHECK(prices.x[0] == 100.0);

    SeriesData rets = load_series_text("# comment\nt,return\n1,0.05\n2,-0.01\n");
    CHECK(rets.kind == SeriesData::Kind::ret);
    CHECK(rets.x == std::vector<double>{0.05, -0.01});
}

TEST_CASE("series files: schema violations name the offending line") {
    try {
        load_series_text("t,price\n1,100\n1,101\n");
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(e.line == 3);
    }
    CHECK_THROWS_AS(load_series_text("price,t\n"), SchemaError);
    CHECK_THROWS_AS(load_series_text("t,price\n1\n"), ParseError);
    CHECK_THROWS_AS(load_series_text("t,price\nx,100\n"), ParseError);
    CHECK_THROWS_AS(load_series_text(""), SchemaError);
}

TEST_CASE("format_double survives the round trip") {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-12.0, 12.0));
        CHECK(parse_double(format_double(v), 1) == v);
    }
}
