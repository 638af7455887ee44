#include "kslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kslab {

namespace {

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_key(const std::string& k)
{
    if (k.empty() || k.front() == '.' || k.back() == '.') return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_') return false;
    return k.find('.') != std::string::npos;
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

ConfigMap ConfigMap::parse(const std::string& text)
{
    ConfigMap cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!valid_key(key))
            throw ConfigError("line " + std::to_string(lineno) + ": malformed key '" + key + "'");
        if (cfg.values_.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg.values_[key] = value;
        cfg.lines_[key] = lineno;
    }
    return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void ConfigMap::set(const std::string& key, const std::string& value)
{
    if (!valid_key(key)) throw ConfigError("malformed key in override: '" + key + "'");
    values_[key] = value;
}

bool ConfigMap::has(const std::string& key) const { return values_.count(key) > 0; }

std::string ConfigMap::get_string(const std::string& key, const std::string& def)
{
    consumed_[key] = true;
    auto it = values_.find(key);
    const std::string v = it == values_.end() ? def : it->second;
    resolved_[key] = v;
    return v;
}

double ConfigMap::get_real(const std::string& key, double def)
{
    consumed_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", def);
        resolved_[key] = buf;
        return def;
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        resolved_[key] = it->second;
        return v;
    } catch (...) {
        throw ConfigError("key " + key + ": not a real number: '" + it->second + "'");
    }
}

long long ConfigMap::get_int(const std::string& key, long long def)
{
    consumed_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) {
        resolved_[key] = std::to_string(def);
        return def;
    }
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("");
        resolved_[key] = it->second;
        return v;
    } catch (...) {
        throw ConfigError("key " + key + ": not an integer: '" + it->second + "'");
    }
}

bool ConfigMap::get_bool(const std::string& key, bool def)
{
    consumed_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) {
        resolved_[key] = def ? "true" : "false";
        return def;
    }
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    resolved_[key] = v;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key " + key + ": not a boolean: '" + it->second + "'");
}

std::vector<double> ConfigMap::get_reals(const std::string& key, const std::vector<double>& def)
{
    consumed_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) {
        std::string echo;
        for (double d : def) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", d);
            echo += (echo.empty() ? "" : ",") + std::string(buf);
        }
        resolved_[key] = echo;
        return def;
    }
    std::vector<double> out;
    for (const std::string& s : split_list(it->second)) {
        try {
            out.push_back(std::stod(s));
        } catch (...) {
            throw ConfigError("key " + key + ": not a real list entry: '" + s + "'");
        }
    }
    resolved_[key] = it->second;
    return out;
}

std::vector<int> ConfigMap::get_ints(const std::string& key, const std::vector<int>& def)
{
    consumed_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) {
        std::string echo;
        for (int d : def) echo += (echo.empty() ? "" : ",") + std::to_string(d);
        resolved_[key] = echo;
        return def;
    }
    std::vector<int> out;
    for (const std::string& s : split_list(it->second)) {
        try {
            out.push_back(std::stoi(s));
        } catch (...) {
            throw ConfigError("key " + key + ": not an integer list entry: '" + s + "'");
        }
    }
    resolved_[key] = it->second;
    return out;
}

std::vector<std::string> ConfigMap::get_strings(const std::string& key,
                                                const std::vector<std::string>& def)
{
    consumed_[key] = true;
    auto it = values_.find(key);
    if (it == values_.end()) {
        std::string echo;
        for (auto& d : def) echo += (echo.empty() ? "" : ",") + d;
        resolved_[key] = echo;
        return def;
    }
    resolved_[key] = it->second;
    return split_list(it->second);
}

void ConfigMap::finish() const
{
    for (auto& [key, value] : values_)
        if (!consumed_.count(key)) throw ConfigError("unknown key: " + key);
}

std::string ConfigMap::resolved_text(const std::string& action) const
{
    std::string out = "action = " + action + "\n";
    for (auto& [key, value] : resolved_) out += key + " = " + value + "\n";
    return out;
}

std::vector<std::vector<std::pair<std::string, std::string>>> ConfigMap::take_sweeps()
{
    // collect sweep.<key> = v1,v2,... entries
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;
    for (auto it = values_.begin(); it != values_.end();) {
        if (it->first.rfind("sweep.", 0) == 0) {
            const std::string target = it->first.substr(6);
            if (!valid_key(target))
                throw ConfigError("sweep target is not a section.key name: " + it->first);
            axes.emplace_back(target, split_list(it->second));
            if (axes.back().second.empty())
                throw ConfigError("sweep axis has no values: " + it->first);
            it = values_.erase(it);
        } else {
            ++it;
        }
    }
    std::vector<std::vector<std::pair<std::string, std::string>>> combos;
    if (axes.empty()) return combos;
    std::vector<std::size_t> idx(axes.size(), 0);
    while (true) {
        std::vector<std::pair<std::string, std::string>> combo;
        for (std::size_t a = 0; a < axes.size(); ++a)
            combo.emplace_back(axes[a].first, axes[a].second[idx[a]]);
        combos.push_back(std::move(combo));
        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < axes[a].second.size()) break;
            idx[a] = 0;
            if (a == 0) return combos;
        }
    }
}

std::uint64_t fnv1a64(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_hex(const std::string& text)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return std::string(buf);
}

} // namespace kslab
