#pragma once

#include <cstdint>
#include <random>

namespace ampeq {

// Fixed 64-bit mixing function (splitmix64 finalizer). Sub-seeds for
// Q-fBm modes are derived as hash64(seed, k) so that adding modes never
// reshuffles the streams of existing ones.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash64(std::uint64_t seed, std::uint64_t k) {
    return mix64(seed ^ mix64(k + 1));
}

// Deterministic Gaussian stream. Uses an explicit Box-Muller transform
// instead of std::normal_distribution so the draw sequence is pinned by
// this file, not by the standard library implementation.
class GaussStream {
public:
    explicit GaussStream(std::uint64_t seed) : eng_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1, u2;
        do {
            u1 = uniform01();
        } while (u1 <= 1e-300);
        u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925287 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    double uniform01() {
        // 53-bit mantissa uniform in [0,1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace ampeq
