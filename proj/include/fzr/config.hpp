#pragma once

// Line-oriented run configuration:
//
//   # comment
//   process = fep
//   [solver]
//   cfl = 0.5
//
// Keys inside a section are addressed as "section.key".  The original text
// is kept so it can be archived verbatim next to the results.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fzr {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RunConfig {
public:
    static RunConfig parse(const std::string& text, const std::string& origin = "<config>") {
        RunConfig cfg;
        cfg.text_ = text;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError(where(origin, lineno) + "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty()) throw ConfigError(where(origin, lineno) + "empty section name");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw ConfigError(where(origin, lineno) + "expected key = value");
            const std::string key = trim(line.substr(0, eq));
            if (key.empty()) throw ConfigError(where(origin, lineno) + "missing key");
            const std::string full = section.empty() ? key : section + "." + key;
            if (cfg.values_.count(full)) throw ConfigError(where(origin, lineno) + "duplicate key '" + full + "'");
            cfg.values_[full] = trim(line.substr(eq + 1));
        }
        return cfg;
    }

    static RunConfig load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot read config file '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        return parse(ss.str(), path);
    }

    const std::string& text() const { return text_; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string str(const std::string& key, const std::string& fallback) const {
        used_.insert(key);
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::string str(const std::string& key) const {
        used_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
        return it->second;
    }

    double real(const std::string& key, double fallback) const { return has(key) ? real(key) : mark(key, fallback); }
    double real(const std::string& key) const { return to_real(key, str(key)); }

    std::int64_t integer(const std::string& key, std::int64_t fallback) const {
        return has(key) ? integer(key) : mark(key, fallback);
    }
    std::int64_t integer(const std::string& key) const {
        const std::string v = str(key);
        std::int64_t out = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
        return out;
    }

    std::vector<double> reals(const std::string& key) const {
        std::vector<double> out;
        if (!has(key)) return out;
        for (const auto& item : split(str(key), ',')) out.push_back(to_real(key, item));
        return out;
    }

    // Keys present in the file that no accessor asked for.
    std::vector<std::string> unused() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

    static std::vector<std::string> split(const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string item;
        std::istringstream in(s);
        while (std::getline(in, item, sep)) {
            item = trim(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    }

    static std::string trim(const std::string& s) {
        const auto a = s.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) return "";
        const auto b = s.find_last_not_of(" \t\r\n");
        return s.substr(a, b - a + 1);
    }

private:
    template <class T>
    T mark(const std::string& key, T value) const {
        used_.insert(key);
        return value;
    }

    static double to_real(const std::string& key, const std::string& v) {
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
        }
    }

    static std::string where(const std::string& origin, int line) {
        return origin + ":" + std::to_string(line) + ": ";
    }

    std::string text_;
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

} // namespace fzr
