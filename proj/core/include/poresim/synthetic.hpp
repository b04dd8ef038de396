#pragma once

#include <cstdint>
#include <string>

#include "poresim/network.hpp"

namespace poresim {

enum class SyntheticKind { Chain, Grid3d, RandomTangent };

SyntheticKind synthetic_kind_from_string(const std::string& name);

/// Axis-aligned lattice of tangent unit-spacing balls (spacing 2r), arcs from
/// tangency.
PoreNetwork make_ball_lattice(int nx, int ny, int nz, double radius = 1.0,
                              double alpha = kDefaultContactAlpha);

/// Deterministic test-fixture networks.
///   chain          — `size` unit balls along z;
///   grid3d         — size^3 unit balls on a cubic lattice;
///   random_tangent — `size` balls grown one at a time, each tangent to a
///                    randomly picked existing ball (connected by construction).
PoreNetwork generate_synthetic_network(SyntheticKind kind, int size, std::uint64_t seed = 0);

} // namespace poresim
