#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace hofd {

/// Seeded random stream with reproducible, implementation-independent draws.
///
/// std::mt19937_64 has a standard-specified output sequence, and the uniform
/// and normal transforms below avoid std::*_distribution (whose mappings are
/// implementation-defined), so identical seeds give bit-identical samples.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Uniform draw in [a, b).
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Standard normal via Box-Muller (two uniforms per draw).
    double normal() {
        double u1 = 1.0 - uniform01();  // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    std::uint64_t next_raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Standard normal CDF.
inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

/// Derives an independent stream seed (e.g. for fresh evaluation samples)
/// from a base seed without colliding with nearby replicate seeds.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t x = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    x ^= x >> 30; x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27; x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

}  // namespace hofd
