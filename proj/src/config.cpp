#include "gpcrec/config.hpp"

#include <fstream>
#include <sstream>

#include "gpcrec/errors.hpp"

namespace gpcrec {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

} // namespace

Config Config::parse(const std::string& text) {
    Config cfg;
    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.values_[key] = value;
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << f.rdbuf();
    return parse(buf.str());
}

std::string Config::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not a number: " + v);
    }
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long Config::get_int(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key " + key + ": not an integer: " + v);
    }
}

long Config::get_int(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = get_string(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key " + key + ": not a boolean: " + v);
}

namespace {

std::vector<std::string> split_commas(const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream stream(v);
    while (std::getline(stream, cur, ',')) parts.push_back(trim(cur));
    return parts;
}

} // namespace

std::vector<double> Config::get_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& p : split_commas(get_string(key))) {
        try {
            out.push_back(std::stod(p));
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": not a number: " + p);
        }
    }
    return out;
}

std::vector<long> Config::get_int_list(const std::string& key) const {
    std::vector<long> out;
    for (const auto& p : split_commas(get_string(key))) {
        try {
            out.push_back(std::stol(p));
        } catch (const std::exception&) {
            throw ConfigError("config key " + key + ": not an integer: " + p);
        }
    }
    return out;
}

} // namespace gpcrec
