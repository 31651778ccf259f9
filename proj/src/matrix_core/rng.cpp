#include "matgeom/rng.hpp"

namespace matgeom {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (index + 1));
    std::seed_seq seq{std::uint32_t(splitmix64(state)), std::uint32_t(splitmix64(state)),
                      std::uint32_t(splitmix64(state)), std::uint32_t(splitmix64(state))};
    return Rng(seq);
}

}  // namespace matgeom
