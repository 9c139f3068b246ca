#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "retrade/errors.hpp"

namespace retrade {

// Flat `key = value` configuration with dotted keys for nesting. Serialized
// form is sorted and canonical, so identical experiments hash identically and
// configs diff cleanly.
class KvConfig {
public:
    static KvConfig parse(const std::string& text) {
        KvConfig cfg;
        std::istringstream in(text);
        std::string line;
        long lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string s = trim(line);
            if (s.empty() || s[0] == '#') continue;
            auto eq = s.find('=');
            if (eq == std::string::npos) throw ParseError("expected `key = value`", lineno);
            std::string key = trim(s.substr(0, eq));
            std::string value = trim(s.substr(eq + 1));
            if (key.empty()) throw ParseError("empty key", lineno);
            for (char c : key)
                if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ||
                      c == '-'))
                    throw ParseError("invalid character in key `" + key + "`", lineno);
            cfg.kv_[key] = value;
        }
        return cfg;
    }

    static KvConfig load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    std::string serialize() const {
        std::string out;
        for (const auto& [k, v] : kv_) {
            out += k;
            out += " = ";
            out += v;
            out += '\n';
        }
        return out;
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { kv_[key] = value; }

    std::string get_str(const std::string& key, const std::string& fallback) const {
        auto it = kv_.find(key);
        return it == kv_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key, double fallback) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        double v{};
        auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
        if (ec != std::errc{} || p != it->second.data() + it->second.size())
            throw SchemaError("config key `" + key + "` is not a number: " + it->second);
        return v;
    }

    std::int64_t get_int(const std::string& key, std::int64_t fallback) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        std::int64_t v{};
        auto [p, ec] = std::from_chars(it->second.data(), it->second.data() + it->second.size(), v);
        if (ec != std::errc{} || p != it->second.data() + it->second.size())
            throw SchemaError("config key `" + key + "` is not an integer: " + it->second);
        return v;
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto it = kv_.find(key);
        if (it == kv_.end()) return fallback;
        if (it->second == "true" || it->second == "1") return true;
        if (it->second == "false" || it->second == "0") return false;
        throw SchemaError("config key `" + key + "` is not a boolean: " + it->second);
    }

    KvConfig without(const std::string& key) const {
        KvConfig copy = *this;
        copy.kv_.erase(key);
        return copy;
    }

    // FNV-1a over the canonical serialization.
    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : serialize()) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::string hash_hex() const {
        char buf[19];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
        return buf;
    }

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    static std::string trim(const std::string& s) {
        std::size_t a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        std::size_t b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

    std::map<std::string, std::string> kv_;
};

}  // namespace retrade
