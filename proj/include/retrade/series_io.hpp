#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "retrade/errors.hpp"
#include "retrade/version.hpp"

namespace retrade {

// Shortest round-trip decimal form; parsing it back recovers the exact bits.
inline std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

inline double parse_double(std::string_view s, long lineno) {
    double v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("not a number: `" + std::string(s) + "`", lineno);
    return v;
}

inline std::int64_t parse_int(std::string_view s, long lineno) {
    std::int64_t v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ParseError("not an integer: `" + std::string(s) + "`", lineno);
    return v;
}

// Provenance comment block carried by every emitted table.
struct Provenance {
    std::string subcommand;
    std::string config_hash;
    std::uint64_t seed{0};

    std::string header() const {
        std::string out;
        out += "# retrade " + std::string(kVersion) + "\n";
        out += "# subcommand: " + subcommand + "\n";
        out += "# config-hash: " + config_hash + "\n";
        out += "# seed: " + std::to_string(seed) + "\n";
        return out;
    }
};

// One observation per line, header row required: (t, price) or (t, return).
struct SeriesData {
    enum class Kind { price, ret };
    Kind kind{Kind::price};
    std::vector<std::int64_t> t;
    std::vector<double> x;
};

inline SeriesData load_series_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    SeriesData out;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line == "t,price")
                out.kind = SeriesData::Kind::price;
            else if (line == "t,return")
                out.kind = SeriesData::Kind::ret;
            else
                throw SchemaError("header must be `t,price` or `t,return`, got `" + line + "`",
                                  lineno);
            saw_header = true;
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw ParseError("expected exactly two comma-separated columns", lineno);
        std::int64_t t = parse_int(std::string_view(line).substr(0, comma), lineno);
        double x = parse_double(std::string_view(line).substr(comma + 1), lineno);
        if (!out.t.empty() && t <= out.t.back())
            throw SchemaError("time index " + std::to_string(t) + " not strictly increasing",
                              lineno);
        out.t.push_back(t);
        out.x.push_back(x);
    }
    if (!saw_header) throw SchemaError("missing header row");
    return out;
}

inline SeriesData load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open series file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_series_text(ss.str());
}

inline std::string serialize_series(const SeriesData& series, const Provenance& prov) {
    std::string out = prov.header();
    out += series.kind == SeriesData::Kind::price ? "t,price\n" : "t,return\n";
    for (std::size_t i = 0; i < series.t.size(); ++i) {
        out += std::to_string(series.t[i]);
        out += ',';
        out += format_double(series.x[i]);
        out += '\n';
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
    if (!out) throw Error("failed writing output file: " + path);
}

inline void save_series(const std::string& path, const SeriesData& series,
                        const Provenance& prov) {
    write_file(path, serialize_series(series, prov));
}

// Generic comma-delimited table with the same provenance block.
class TableBuilder {
public:
    explicit TableBuilder(const Provenance& prov) : out_(prov.header()) {}

    void header(const std::string& cols) {
        out_ += cols;
        out_ += '\n';
    }
    void raw_row(const std::string& row) {
        out_ += row;
        out_ += '\n';
    }
    const std::string& str() const { return out_; }

private:
    std::string out_;
};

}  // namespace retrade
