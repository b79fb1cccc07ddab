#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ampeq {

// Flat key=value manifest: one key per line, '#' comments, insertion
// order preserved so that identical configurations serialize to
// identical bytes.
class Manifest {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, std::int64_t value);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& dflt) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

    // Throws std::invalid_argument naming the first key not in `allowed`.
    void require_known_keys(const std::vector<std::string>& allowed) const;

    static Manifest parse(const std::string& text);
    static Manifest load(const std::string& filename);
    std::string serialize() const;
    void save(const std::string& filename) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

// Shared numeric range checks (H in (0,1), eps > 0, modes >= 4, rho > 1);
// throw std::invalid_argument with the offending key.
void validate_hurst(double h, const std::string& key = "hurst");
void validate_eps(double eps, const std::string& key = "eps");
void validate_modes(std::int64_t modes, const std::string& key = "modes");
void validate_rho(double rho, const std::string& key = "rho");

}  // namespace ampeq
