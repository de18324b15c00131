#pragma once

#include <map>
#include <string>
#include <vector>

namespace stereosafe {

/// Line-based `key = value` configuration with `#` comments. Values keep
/// internal whitespace so vector-valued keys read naturally.
class ConfigMap {
public:
    static ConfigMap parse_file(const std::string& path);
    static ConfigMap parse_string(const std::string& text, const std::string& label);

    const std::string& path() const { return path_; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::string path_;
    std::map<std::string, std::string> values_;
};

}  // namespace stereosafe
