#pragma once

// Small fixture networks and states shared across the test suites.

#include <random>
#include <vector>

#include "poresim/biology.hpp"
#include "poresim/network.hpp"

namespace poresim::testing {

/// Two balls with explicit unit volumes joined by one arc with the given
/// contact area and distance. theta = d_c * s / d * dt maps directly onto the
/// worked examples.
inline PoreNetwork two_ball_unit_volume(double contact_area = 1.0, double arc_distance = 1.0) {
    std::vector<BallNode> nodes(2);
    nodes[0] = {0, {0, 0, 0}, 1.0, 1.0, 0};
    nodes[1] = {1, {0, 0, arc_distance}, 1.0, 1.0, 1};
    std::vector<AdjacencyArc> arcs{{0, 1, arc_distance, contact_area}};
    return PoreNetwork(std::move(nodes), std::move(arcs));
}

/// n unit-volume balls in a line, consecutive pairs joined with s = d = 1.
inline PoreNetwork unit_volume_chain(int n) {
    std::vector<BallNode> nodes(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        nodes[static_cast<size_t>(i)] = {i, {0, 0, static_cast<double>(i)}, 1.0, 1.0, i};
    std::vector<AdjacencyArc> arcs;
    for (int i = 0; i + 1 < n; ++i) arcs.push_back({i, i + 1, 1.0, 1.0});
    return PoreNetwork(std::move(nodes), std::move(arcs));
}

inline WaterMask all_water(const PoreNetwork& net) {
    return WaterMask(static_cast<size_t>(net.node_count()), 1);
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline PoolGrid random_states(size_t n, std::mt19937_64& rng, double scale = 1.0) {
    PoolGrid grid(n);
    for (size_t i = 0; i < n; ++i) {
        grid.mb[i] = scale * uniform01(rng);
        grid.dom[i] = scale * uniform01(rng);
        grid.som[i] = scale * uniform01(rng);
        grid.fom[i] = scale * uniform01(rng);
        grid.co2[i] = scale * uniform01(rng);
    }
    return grid;
}

} // namespace poresim::testing
