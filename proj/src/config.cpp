#include "stereosafe/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "stereosafe/errors.hpp"

namespace stereosafe {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text, const std::string& label) {
    ConfigMap cfg;
    cfg.path_ = label;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(label, "line " + std::to_string(line_no), "expected `key = value`");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(label, "line " + std::to_string(line_no), "empty key");
        cfg.values_[key] = value;
    }
    return cfg;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "-", "cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

std::string ConfigMap::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(path_, key, "missing required key");
    return it->second;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double ConfigMap::get_double(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        std::size_t used = 0;
        const double value = std::stod(raw, &used);
        if (!trim(raw.substr(used)).empty()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw ConfigError(path_, key, "not a number: `" + raw + "`");
    }
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

int ConfigMap::get_int(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        std::size_t used = 0;
        const int value = std::stoi(raw, &used);
        if (!trim(raw.substr(used)).empty()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw ConfigError(path_, key, "not an integer: `" + raw + "`");
    }
}

int ConfigMap::get_int(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string raw = get_string(key);
    if (raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "no") return false;
    throw ConfigError(path_, key, "not a boolean: `" + raw + "`");
}

std::vector<double> ConfigMap::get_doubles(const std::string& key) const {
    const std::string raw = get_string(key);
    std::istringstream in(raw);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw ConfigError(path_, key, "not a number list: `" + raw + "`");
    return values;
}

}  // namespace stereosafe
