#pragma once

#include <cstdint>
#include <vector>

#include "poresim/network.hpp"

namespace poresim {

/// Distributes `total` over the water-filled balls proportionally to their
/// volumes (equal concentration everywhere). The sum of the result equals
/// `total` exactly: the largest ball absorbs the rounding residual.
std::vector<double> place_dom_uniform(const PoreNetwork& net, const WaterMask& water, double total);

/// Distributes `total` proportionally to volume over the water-filled balls
/// whose slab [z - r, z + r] intersects [z_min, z_max).
std::vector<double> place_dom_slab(const PoreNetwork& net, const WaterMask& water, double total,
                                   double z_min, double z_max);

/// Puts all of `total` in one water-filled ball. ball_id < 0 picks one
/// uniformly at random (seeded).
std::vector<double> place_dom_single_ball(const PoreNetwork& net, const WaterMask& water,
                                          double total, int ball_id, std::uint64_t seed);

/// Picks n_spots distinct water-filled balls uniformly at random (seeded) and
/// splits `total` equally across them. Deterministic for a fixed seed.
std::vector<double> place_mb_spots(const PoreNetwork& net, const WaterMask& water, int n_spots,
                                   double total, std::uint64_t seed);

} // namespace poresim
