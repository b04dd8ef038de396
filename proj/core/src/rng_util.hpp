#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace poresim {

/// Bounded uniform integer in [0, bound) straight from the generator,
/// independent of the standard library's distribution implementation so
/// seeded runs reproduce across toolchains.
inline std::uint64_t bounded_pick(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

} // namespace poresim
