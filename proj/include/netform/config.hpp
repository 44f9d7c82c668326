#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "netform/common.hpp"

namespace netform {

// Flat key-value run configuration: `key = value` lines, '#' comments.
// Command-line flags are merged on top (flags win). Serialization is
// sorted by key so parse -> serialize -> parse is the identity.
struct RunConfig {
    std::map<std::string, std::string> kv;

    bool operator==(const RunConfig&) const = default;

    static RunConfig from_string(const std::string& text) {
        RunConfig cfg;
        std::istringstream in(text);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            std::string_view sv = trim(line);
            if (sv.empty() || sv.front() == '#') continue;
            const auto eq = sv.find('=');
            if (eq == std::string_view::npos)
                throw io_error("config line " + fmt_int(static_cast<long long>(lineno)) + ": expected 'key = value'");
            std::string key(trim(sv.substr(0, eq)));
            std::string value(trim(sv.substr(eq + 1)));
            if (key.empty())
                throw io_error("config line " + fmt_int(static_cast<long long>(lineno)) + ": empty key");
            cfg.kv[key] = value;
        }
        return cfg;
    }

    static RunConfig from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw io_error("cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return from_string(ss.str());
    }

    std::string serialize() const {
        std::string out;
        for (const auto& [k, v] : kv) {
            out += k;
            out += " = ";
            out += v;
            out += '\n';
        }
        return out;
    }

    bool has(const std::string& key) const { return kv.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { kv[key] = value; }

    std::string get_str(const std::string& key, const std::string& fallback = "") const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    }
    std::string require_str(const std::string& key) const {
        auto it = kv.find(key);
        if (it == kv.end()) throw io_error("missing required config key: " + key);
        return it->second;
    }
    long long get_int(const std::string& key, long long fallback) const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : parse_int(it->second, key.c_str());
    }
    double get_double(const std::string& key, double fallback) const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : parse_double(it->second, key.c_str());
    }
    bool get_bool(const std::string& key, bool fallback) const {
        auto it = kv.find(key);
        if (it == kv.end()) return fallback;
        const std::string& v = it->second;
        if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
        if (v == "0" || v == "false" || v == "no" || v == "off") return false;
        throw io_error("config key " + key + ": expected boolean, got '" + v + "'");
    }
    std::vector<double> get_double_list(const std::string& key) const {
        std::vector<double> out;
        auto it = kv.find(key);
        if (it == kv.end()) return out;
        std::string_view sv = it->second;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= sv.size(); ++i) {
            if (i == sv.size() || sv[i] == ',') {
                auto piece = trim(sv.substr(start, i - start));
                if (!piece.empty()) out.push_back(parse_double(piece, key.c_str()));
                start = i + 1;
            }
        }
        return out;
    }
};

}  // namespace netform
