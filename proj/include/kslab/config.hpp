#pragma once

#include <cstdint>
#include <stdexcept>
#include <map>
#include <string>
#include <vector>

namespace kslab {

// Flat, line-oriented `section.key = value` configuration. '#' starts a
// comment; keys are dot-separated identifiers. Parsing reports the offending
// line; resolution rejects unknown keys and echoes every default back.
class ConfigMap {
public:
    static ConfigMap parse(const std::string& text);
    static ConfigMap parse_file(const std::string& path);

    void set(const std::string& key, const std::string& value); // override, e.g. from --set
    bool has(const std::string& key) const;

    std::string get_string(const std::string& key, const std::string& def);
    double get_real(const std::string& key, double def);
    long long get_int(const std::string& key, long long def);
    bool get_bool(const std::string& key, bool def);
    std::vector<double> get_reals(const std::string& key, const std::vector<double>& def);
    std::vector<int> get_ints(const std::string& key, const std::vector<int>& def);
    std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& def);

    // every key consumed by a get_* call plus its resolved value; calling
    // finish() rejects keys that were never consumed
    void finish() const;
    std::string resolved_text(const std::string& action) const;

    // sweep.<full.key> entries: removed from the map and expanded into the
    // Cartesian product of override sets (deterministic order)
    std::vector<std::vector<std::pair<std::string, std::string>>> take_sweeps();

    const std::map<std::string, std::string>& raw() const { return values_; }

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
    mutable std::map<std::string, std::string> resolved_;
    mutable std::map<std::string, bool> consumed_;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

std::uint64_t fnv1a64(const std::string& text);
std::string digest_hex(const std::string& text);

} // namespace kslab
