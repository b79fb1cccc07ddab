#include "ampeq/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ampeq {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

void Manifest::set(const std::string& key, const std::string& value) {
    for (auto& e : entries_)
        if (e.first == key) {
            e.second = value;
            return;
        }
    entries_.emplace_back(key, value);
}

void Manifest::set(const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    set(key, std::string(buf));
}

void Manifest::set(const std::string& key, std::uint64_t value) {
    set(key, std::to_string(value));
}

void Manifest::set(const std::string& key, std::int64_t value) {
    set(key, std::to_string(value));
}

bool Manifest::has(const std::string& key) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& e) { return e.first == key; });
}

const std::string& Manifest::get(const std::string& key) const {
    for (const auto& e : entries_)
        if (e.first == key) return e.second;
    throw std::invalid_argument("missing manifest key: " + key);
}

std::string Manifest::get_or(const std::string& key,
                             const std::string& dflt) const {
    return has(key) ? get(key) : dflt;
}

double Manifest::get_double(const std::string& key) const {
    const std::string& v = get(key);
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("manifest key " + key +
                                    " is not a number: " + v);
    }
    if (pos != v.size())
        throw std::invalid_argument("manifest key " + key +
                                    " is not a number: " + v);
    return out;
}

std::int64_t Manifest::get_int(const std::string& key) const {
    const std::string& v = get(key);
    std::size_t pos = 0;
    long long out;
    try {
        out = std::stoll(v, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("manifest key " + key +
                                    " is not an integer: " + v);
    }
    if (pos != v.size())
        throw std::invalid_argument("manifest key " + key +
                                    " is not an integer: " + v);
    return out;
}

std::uint64_t Manifest::get_uint(const std::string& key) const {
    const std::int64_t v = get_int(key);
    if (v < 0)
        throw std::invalid_argument("manifest key " + key +
                                    " must be nonnegative");
    return static_cast<std::uint64_t>(v);
}

void Manifest::require_known_keys(
    const std::vector<std::string>& allowed) const {
    for (const auto& e : entries_)
        if (std::find(allowed.begin(), allowed.end(), e.first) ==
            allowed.end())
            throw std::invalid_argument("unknown manifest key: " + e.first);
}

Manifest Manifest::parse(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("manifest line " +
                                        std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument("manifest line " +
                                        std::to_string(lineno) +
                                        ": empty key");
        m.set(key, value);
    }
    return m;
}

Manifest Manifest::load(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot open " + filename);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string Manifest::serialize() const {
    std::string out;
    for (const auto& e : entries_) {
        out += e.first;
        out += '=';
        out += e.second;
        out += '\n';
    }
    return out;
}

void Manifest::save(const std::string& filename) const {
    std::ofstream out(filename, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + filename);
    out << serialize();
}

void validate_hurst(double h, const std::string& key) {
    if (!(h > 0.0 && h < 1.0))
        throw std::invalid_argument(key +
                                    " must lie in the open interval (0,1)");
}

void validate_eps(double eps, const std::string& key) {
    if (!(eps > 0.0)) throw std::invalid_argument(key + " must be > 0");
}

void validate_modes(std::int64_t modes, const std::string& key) {
    if (modes < 4) throw std::invalid_argument(key + " must be >= 4");
}

void validate_rho(double rho, const std::string& key) {
    if (!(rho > 1.0))
        throw std::invalid_argument(key + " must be > 1 (trace class)");
}

}  // namespace ampeq
