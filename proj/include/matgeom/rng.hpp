#pragma once

#include <cstdint>
#include <random>

namespace matgeom {

using Rng = std::mt19937_64;

// Independent stream `index` derived from a master seed.
Rng make_stream(std::uint64_t seed, std::uint64_t index);

inline double std_normal(Rng& rng) {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Gamma(shape, 1) variate.
inline double gamma_variate(Rng& rng, double shape) {
    return std::gamma_distribution<double>(shape, 1.0)(rng);
}

}  // namespace matgeom
