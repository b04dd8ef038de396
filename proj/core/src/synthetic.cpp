#include "poresim/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "poresim/errors.hpp"
#include "rng_util.hpp"

namespace poresim {

SyntheticKind synthetic_kind_from_string(const std::string& name) {
    if (name == "chain") return SyntheticKind::Chain;
    if (name == "grid3d") return SyntheticKind::Grid3d;
    if (name == "random_tangent" || name == "random-tangent") return SyntheticKind::RandomTangent;
    throw ConfigError("unknown synthetic network kind: " + name);
}

PoreNetwork make_ball_lattice(int nx, int ny, int nz, double radius, double alpha) {
    if (nx < 1 || ny < 1 || nz < 1) throw DomainError("lattice dimensions must be at least 1");
    std::vector<BallNode> nodes;
    nodes.reserve(static_cast<size_t>(nx) * static_cast<size_t>(ny) * static_cast<size_t>(nz));
    const double spacing = 2.0 * radius;
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                BallNode b;
                b.id = static_cast<int>(nodes.size());
                b.external_id = b.id;
                b.center = {spacing * i, spacing * j, spacing * k};
                b.radius = radius;
                b.volume = ball_volume(radius);
                nodes.push_back(b);
            }
    std::vector<AdjacencyArc> arcs = derive_arcs_by_tangency(nodes, alpha);
    return PoreNetwork(std::move(nodes), std::move(arcs));
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Vec3 random_unit_vector(std::mt19937_64& rng) {
    // Marsaglia's method.
    for (;;) {
        const double u = 2.0 * uniform01(rng) - 1.0;
        const double v = 2.0 * uniform01(rng) - 1.0;
        const double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        const double f = 2.0 * std::sqrt(1.0 - s);
        return {u * f, v * f, 1.0 - 2.0 * s};
    }
}

PoreNetwork grow_random_tangent(int size, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<BallNode> nodes;
    nodes.reserve(static_cast<size_t>(size));

    auto radius_sample = [&rng] { return 0.6 + 0.8 * uniform01(rng); };

    BallNode first;
    first.id = 0;
    first.external_id = 0;
    first.radius = radius_sample();
    first.volume = ball_volume(first.radius);
    nodes.push_back(first);

    while (static_cast<int>(nodes.size()) < size) {
        const double r = radius_sample();
        bool placed = false;
        for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
            const BallNode& parent = nodes[static_cast<size_t>(bounded_pick(rng, nodes.size()))];
            const Vec3 dir = random_unit_vector(rng);
            const double reach = parent.radius + r;
            const Vec3 center{parent.center.x + dir.x * reach, parent.center.y + dir.y * reach,
                              parent.center.z + dir.z * reach};
            bool overlaps = false;
            for (const BallNode& b : nodes) {
                if (distance(center, b.center) < 0.99 * (b.radius + r)) {
                    overlaps = true;
                    break;
                }
            }
            if (overlaps) continue;
            BallNode node;
            node.id = static_cast<int>(nodes.size());
            node.external_id = node.id;
            node.center = center;
            node.radius = r;
            node.volume = ball_volume(r);
            nodes.push_back(node);
            placed = true;
        }
        if (!placed)
            throw DomainError("random_tangent growth stalled at " + std::to_string(nodes.size()) +
                              " balls");
    }

    std::vector<AdjacencyArc> arcs = derive_arcs_by_tangency(nodes);
    return PoreNetwork(std::move(nodes), std::move(arcs));
}

} // namespace

PoreNetwork generate_synthetic_network(SyntheticKind kind, int size, std::uint64_t seed) {
    if (size < 1) throw DomainError("synthetic network size must be at least 1");
    switch (kind) {
        case SyntheticKind::Chain: return make_ball_lattice(1, 1, size);
        case SyntheticKind::Grid3d: return make_ball_lattice(size, size, size);
        case SyntheticKind::RandomTangent: return grow_random_tangent(size, seed);
    }
    throw ConfigError("unknown synthetic network kind");
}

} // namespace poresim
