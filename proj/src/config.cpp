#include "miri/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "miri/errors.hpp"

namespace miri {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
    return out;
}

double parse_f64(const std::string& key, const std::string& v) {
    double out;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config: '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& v) {
    std::vector<std::size_t> out;
    if (trim(v).empty()) return out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(static_cast<std::size_t>(parse_u64(key, trim(item))));
    }
    return out;
}

}  // namespace

void MiriConfig::validate(std::size_t n_rows) const {
    if (outer_iterations < 1) throw ConfigError("config: outer_iterations must be >= 1");
    if (train_steps < 1) throw ConfigError("config: train_steps must be >= 1");
    if (batch_size < 1) throw ConfigError("config: batch_size must be >= 1");
    if (n_rows > 0 && batch_size > n_rows)
        throw ConfigError("config: batch_size " + std::to_string(batch_size) +
                          " exceeds row count " + std::to_string(n_rows));
    if (euler_steps < 1) throw ConfigError("config: euler_steps must be >= 1");
    if (!(learning_rate > 0.0)) throw ConfigError("config: learning_rate must be positive");
    if (mi_bins < 2) throw ConfigError("config: mi_bins must be >= 2");
}

std::string MiriConfig::to_text() const {
    std::ostringstream out;
    out << "outer_iterations = " << outer_iterations << "\n";
    out << "train_steps = " << train_steps << "\n";
    out << "batch_size = " << batch_size << "\n";
    out << "euler_steps = " << euler_steps << "\n";
    out << "hidden = ";
    for (std::size_t i = 0; i < hidden.size(); ++i) out << (i ? "," : "") << hidden[i];
    out << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", learning_rate);
    out << "learning_rate = " << buf << "\n";
    out << "init = " << to_string(init) << "\n";
    out << "seed = " << seed << "\n";
    out << "warm_start = " << (warm_start ? "true" : "false") << "\n";
    out << "mi_bins = " << mi_bins << "\n";
    return out.str();
}

std::string MiriConfig::hash() const {
    const std::string text = to_text();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

MiriConfig parse_config(const std::string& text, const MiriConfig& base) {
    MiriConfig cfg = base;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "outer_iterations")
            cfg.outer_iterations = static_cast<std::size_t>(parse_u64(key, value));
        else if (key == "train_steps")
            cfg.train_steps = static_cast<std::size_t>(parse_u64(key, value));
        else if (key == "batch_size")
            cfg.batch_size = static_cast<std::size_t>(parse_u64(key, value));
        else if (key == "euler_steps")
            cfg.euler_steps = static_cast<std::size_t>(parse_u64(key, value));
        else if (key == "hidden")
            cfg.hidden = parse_size_list(key, value);
        else if (key == "learning_rate")
            cfg.learning_rate = parse_f64(key, value);
        else if (key == "init")
            cfg.init = parse_init_strategy(value);
        else if (key == "seed")
            cfg.seed = parse_u64(key, value);
        else if (key == "warm_start")
            cfg.warm_start = parse_bool(key, value);
        else if (key == "mi_bins")
            cfg.mi_bins = static_cast<std::size_t>(parse_u64(key, value));
        else
            throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
    }
    return cfg;
}

MiriConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace miri
