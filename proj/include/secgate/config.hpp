#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace secgate {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

/// `key=value` lines, `#` comments, blank lines ignored.
class Config {
public:
    Config() = default;

    static Config parse(std::string_view text) {
        Config cfg;
        std::size_t lineno = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t nl = text.find('\n', pos);
            std::string_view line =
                nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
            ++lineno;
            std::string t = trim(line);
            if (!t.empty() && t[0] != '#') {
                std::size_t eq = t.find('=');
                if (eq == std::string::npos) {
                    throw std::runtime_error("config line " + std::to_string(lineno) +
                                             ": expected key=value");
                }
                cfg.values_[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
            }
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
        return cfg;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    std::optional<std::string> get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) return std::nullopt;
        return it->second;
    }

    std::string get_or(const std::string& key, std::string def) const {
        auto v = get(key);
        return v ? *v : std::move(def);
    }

    std::string require(const std::string& key) const {
        auto v = get(key);
        if (!v) throw std::runtime_error("missing config key: " + key);
        return *v;
    }

    std::int64_t get_int(const std::string& key, std::int64_t def) const {
        auto v = get(key);
        if (!v) return def;
        try {
            return std::stoll(*v);
        } catch (const std::exception&) {
            throw std::runtime_error("config key " + key + ": not an integer: " + *v);
        }
    }

    bool get_bool(const std::string& key, bool def) const {
        auto v = get(key);
        if (!v) return def;
        if (*v == "true" || *v == "1" || *v == "yes") return true;
        if (*v == "false" || *v == "0" || *v == "no") return false;
        throw std::runtime_error("config key " + key + ": not a boolean: " + *v);
    }

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace secgate
