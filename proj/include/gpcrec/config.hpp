#ifndef GPCREC_CONFIG_HPP
#define GPCREC_CONFIG_HPP

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gpcrec {

/// Flat `key = value` configuration with `#` comments.
class Config {
public:
    Config() = default;
    static Config parse(const std::string& text);
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value) { values_[key] = value; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_list(const std::string& key) const;
    std::vector<long> get_int_list(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

} // namespace gpcrec

#endif
