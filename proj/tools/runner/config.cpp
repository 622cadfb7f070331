#include "runner/config.hpp"

#include "splab/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace splab::runner {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line)
{
    const auto pos = line.find_first_of("#;");
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool valid_name(const std::string& s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

} // namespace

double parse_double(const std::string& key, const std::string& text)
{
    const std::string t = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty()) {
        throw ValidationError("config key '" + key + "': not a number: '" + text + "'");
    }
    return value;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& text)
{
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) {
        throw ValidationError("config key '" + key + "': empty list");
    }
    return out;
}

Config Config::parse(const std::string& text)
{
    std::map<std::string, std::string> entries;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(strip_comment(line));
        if (body.empty()) {
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']' || !valid_name(trim(body.substr(1, body.size() - 2)))) {
                throw ValidationError("config line " + std::to_string(lineno) + ": bad section header");
            }
            section = trim(body.substr(1, body.size() - 2));
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string name = trim(body.substr(0, eq));
        if (!valid_name(name)) {
            throw ValidationError("config line " + std::to_string(lineno) + ": bad key name");
        }
        const std::string key = section.empty() ? name : section + "." + name;
        if (!entries.emplace(key, trim(body.substr(eq + 1))).second) {
            throw ValidationError("config key '" + key + "' given twice");
        }
    }
    return Config(std::move(entries));
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ValidationError("cannot read config file " + path.string());
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    if (path.extension() != ".json") {
        return parse(buf.str());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("manifest parse error: ") + e.what());
    }
    if (!doc.contains("config") || !doc["config"].is_object()) {
        throw ValidationError("manifest has no config object");
    }
    std::map<std::string, std::string> entries;
    for (const auto& [k, v] : doc["config"].items()) {
        if (!v.is_string()) {
            throw ValidationError("manifest config value for '" + k + "' must be a string");
        }
        entries.emplace(k, v.get<std::string>());
    }
    return Config(std::move(entries));
}

std::string Config::get_string(const std::string& key, const std::string& fallback)
{
    used_.insert(key);
    const auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

std::string Config::require_string(const std::string& key)
{
    used_.insert(key);
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        throw ValidationError("config key '" + key + "' is required");
    }
    return it->second;
}

double Config::get_double(const std::string& key, double fallback)
{
    return has(key) ? require_double(key) : (used_.insert(key), fallback);
}

double Config::require_double(const std::string& key)
{
    return parse_double(key, require_string(key));
}

long long Config::get_int(const std::string& key, long long fallback)
{
    if (!has(key)) {
        used_.insert(key);
        return fallback;
    }
    const std::string t = trim(require_string(key));
    long long value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty()) {
        throw ValidationError("config key '" + key + "': not an integer: '" + t + "'");
    }
    return value;
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback)
{
    if (!has(key)) {
        used_.insert(key);
        return fallback;
    }
    const std::string t = trim(require_string(key));
    std::uint64_t value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty()) {
        throw ValidationError("config key '" + key + "': not a non-negative integer: '" + t + "'");
    }
    return value;
}

bool Config::get_bool(const std::string& key, bool fallback)
{
    if (!has(key)) {
        used_.insert(key);
        return fallback;
    }
    const std::string t = require_string(key);
    if (t == "true" || t == "1" || t == "yes") {
        return true;
    }
    if (t == "false" || t == "0" || t == "no") {
        return false;
    }
    throw ValidationError("config key '" + key + "': not a boolean: '" + t + "'");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback)
{
    if (!has(key)) {
        used_.insert(key);
        return fallback;
    }
    return require_doubles(key);
}

std::vector<double> Config::require_doubles(const std::string& key)
{
    return parse_doubles(key, require_string(key));
}

void Config::reject_unused() const
{
    for (const auto& [key, value] : entries_) {
        if (used_.count(key) == 0) {
            throw ValidationError("unknown config key '" + key + "'");
        }
    }
}

} // namespace splab::runner
