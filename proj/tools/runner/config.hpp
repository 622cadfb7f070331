#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace splab::runner {

//! Flat view of an INI-style config: keys are "section.key". Values stay as
//! text; typed getters parse and validate on access and record which keys
//! were consumed so leftovers can be rejected.
class Config {
  public:
    Config() = default;
    explicit Config(std::map<std::string, std::string> entries) : entries_(std::move(entries)) {}

    //! Parses `[section]` headers and `key = value` lines; '#' and ';' start
    //! comments. Duplicate keys are an error.
    static Config parse(const std::string& text);
    //! Reads an INI file, or the "config" object of a manifest.json.
    static Config load(const std::filesystem::path& path);

    [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { entries_[key] = value; }

    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback);
    [[nodiscard]] std::string require_string(const std::string& key);
    [[nodiscard]] double get_double(const std::string& key, double fallback);
    [[nodiscard]] double require_double(const std::string& key);
    [[nodiscard]] long long get_int(const std::string& key, long long fallback);
    [[nodiscard]] std::uint64_t get_uint(const std::string& key, std::uint64_t fallback);
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback);
    [[nodiscard]] std::vector<double> get_doubles(const std::string& key,
                                                  const std::vector<double>& fallback);
    [[nodiscard]] std::vector<double> require_doubles(const std::string& key);

    //! Throws ValidationError naming the first key never read.
    void reject_unused() const;

    [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept
    {
        return entries_;
    }

  private:
    std::map<std::string, std::string> entries_;
    std::set<std::string> used_;
};

[[nodiscard]] double parse_double(const std::string& key, const std::string& text);
[[nodiscard]] std::vector<double> parse_doubles(const std::string& key, const std::string& text);

} // namespace splab::runner
