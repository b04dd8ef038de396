#include "poresim/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "poresim/errors.hpp"

namespace poresim {

Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }

double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

double ball_volume(double radius) {
    return (4.0 / 3.0) * std::numbers::pi * radius * radius * radius;
}

double compute_contact_area(double r_i, double r_j, double alpha) {
    if (r_i <= 0.0 || r_j <= 0.0)
        throw DomainError("contact area requires positive radii");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw DomainError("contact alpha must be in (0, 1], got " + std::to_string(alpha));
    const double r = std::min(r_i, r_j);
    return alpha * std::numbers::pi * r * r;
}

PoreNetwork::PoreNetwork(std::vector<BallNode> nodes, std::vector<AdjacencyArc> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    for (auto& arc : arcs_) {
        if (arc.i > arc.j) std::swap(arc.i, arc.j);
    }
    validate();
    build_incidence();
}

void PoreNetwork::validate() const {
    const int n = node_count();
    for (int i = 0; i < n; ++i) {
        const BallNode& b = nodes_[static_cast<size_t>(i)];
        if (b.id != i)
            throw ValidationError("node ids must be dense 0-based (node " + std::to_string(i) +
                                  " has id " + std::to_string(b.id) + ")");
        if (!(b.radius > 0.0))
            throw ValidationError("node " + std::to_string(i) + " has non-positive radius");
        if (!(b.volume > 0.0))
            throw ValidationError("node " + std::to_string(i) + " has non-positive volume");
    }
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(arcs_.size() * 2);
    for (const AdjacencyArc& a : arcs_) {
        if (a.i < 0 || a.i >= n || a.j < 0 || a.j >= n)
            throw ValidationError("arc (" + std::to_string(a.i) + "," + std::to_string(a.j) +
                                  ") references a node outside [0," + std::to_string(n) + ")");
        if (a.i == a.j)
            throw ValidationError("self-loop arc on node " + std::to_string(a.i));
        if (!(a.distance > 0.0))
            throw ValidationError("arc (" + std::to_string(a.i) + "," + std::to_string(a.j) +
                                  ") has non-positive distance");
        if (!(a.contact_area > 0.0))
            throw ValidationError("arc (" + std::to_string(a.i) + "," + std::to_string(a.j) +
                                  ") has non-positive contact area");
        const std::uint64_t key =
            (static_cast<std::uint64_t>(a.i) << 32) | static_cast<std::uint32_t>(a.j);
        if (!seen.insert(key).second)
            throw ValidationError("duplicate arc (" + std::to_string(a.i) + "," +
                                  std::to_string(a.j) + ")");
    }
}

void PoreNetwork::build_incidence() {
    const int n = node_count();
    incidence_offsets_.assign(static_cast<size_t>(n) + 1, 0);
    for (const AdjacencyArc& a : arcs_) {
        ++incidence_offsets_[static_cast<size_t>(a.i) + 1];
        ++incidence_offsets_[static_cast<size_t>(a.j) + 1];
    }
    for (int i = 0; i < n; ++i)
        incidence_offsets_[static_cast<size_t>(i) + 1] += incidence_offsets_[static_cast<size_t>(i)];
    incidence_arcs_.resize(arcs_.size() * 2);
    std::vector<int> cursor(incidence_offsets_.begin(), incidence_offsets_.end() - 1);
    for (int k = 0; k < arc_count(); ++k) {
        const AdjacencyArc& a = arcs_[static_cast<size_t>(k)];
        incidence_arcs_[static_cast<size_t>(cursor[static_cast<size_t>(a.i)]++)] = k;
        incidence_arcs_[static_cast<size_t>(cursor[static_cast<size_t>(a.j)]++)] = k;
    }
}

std::span<const int> PoreNetwork::incident_arcs(int node) const {
    const auto begin = static_cast<size_t>(incidence_offsets_[static_cast<size_t>(node)]);
    const auto end = static_cast<size_t>(incidence_offsets_[static_cast<size_t>(node) + 1]);
    return {incidence_arcs_.data() + begin, end - begin};
}

double PoreNetwork::total_volume() const {
    double total = 0.0;
    for (const BallNode& b : nodes_) total += b.volume;
    return total;
}

PoreNetwork PoreNetwork::with_contact_areas(double alpha) const {
    std::vector<AdjacencyArc> arcs = arcs_;
    for (AdjacencyArc& a : arcs) {
        a.contact_area = compute_contact_area(nodes_[static_cast<size_t>(a.i)].radius,
                                              nodes_[static_cast<size_t>(a.j)].radius, alpha);
    }
    return PoreNetwork(nodes_, std::move(arcs));
}

namespace {

struct CellKey {
    long long x, y, z;
    bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
    size_t operator()(const CellKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (long long v : {k.x, k.y, k.z}) {
            h ^= static_cast<std::uint64_t>(v);
            h *= 1099511628211ull;
        }
        return static_cast<size_t>(h);
    }
};

} // namespace

std::vector<AdjacencyArc> derive_arcs_by_tangency(const std::vector<BallNode>& nodes, double alpha,
                                                  double epsilon) {
    std::vector<AdjacencyArc> arcs;
    if (nodes.size() < 2) return arcs;

    double max_radius = 0.0;
    for (const BallNode& b : nodes) max_radius = std::max(max_radius, b.radius);
    const double cell = 2.0 * max_radius + epsilon;

    std::unordered_map<CellKey, std::vector<int>, CellKeyHash> grid;
    grid.reserve(nodes.size());
    auto key_of = [cell](const Vec3& c) {
        return CellKey{static_cast<long long>(std::floor(c.x / cell)),
                       static_cast<long long>(std::floor(c.y / cell)),
                       static_cast<long long>(std::floor(c.z / cell))};
    };
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
        grid[key_of(nodes[static_cast<size_t>(i)].center)].push_back(i);

    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
        const BallNode& bi = nodes[static_cast<size_t>(i)];
        const CellKey k = key_of(bi.center);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz) {
                    auto it = grid.find({k.x + dx, k.y + dy, k.z + dz});
                    if (it == grid.end()) continue;
                    for (int j : it->second) {
                        if (j <= i) continue;
                        const BallNode& bj = nodes[static_cast<size_t>(j)];
                        const double d = distance(bi.center, bj.center);
                        if (d <= bi.radius + bj.radius + epsilon && d > 0.0) {
                            arcs.push_back(
                                {i, j, d, compute_contact_area(bi.radius, bj.radius, alpha)});
                        }
                    }
                }
    }
    std::sort(arcs.begin(), arcs.end(), [](const AdjacencyArc& a, const AdjacencyArc& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    return arcs;
}

std::vector<std::vector<int>> connected_components(const PoreNetwork& net, const WaterMask& active) {
    const int n = net.node_count();
    if (static_cast<int>(active.size()) != n)
        throw DimensionMismatch("active mask length " + std::to_string(active.size()) +
                                " differs from node count " + std::to_string(n));

    // Union-find with path halving and union by size.
    std::vector<int> parent(static_cast<size_t>(n));
    std::vector<int> size(static_cast<size_t>(n), 1);
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    auto find = [&parent](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size[static_cast<size_t>(a)] < size[static_cast<size_t>(b)]) std::swap(a, b);
        parent[static_cast<size_t>(b)] = a;
        size[static_cast<size_t>(a)] += size[static_cast<size_t>(b)];
    };

    for (const AdjacencyArc& a : net.arcs()) {
        if (active[static_cast<size_t>(a.i)] && active[static_cast<size_t>(a.j)]) unite(a.i, a.j);
    }

    std::unordered_map<int, int> root_to_component;
    std::vector<std::vector<int>> components;
    for (int i = 0; i < n; ++i) {
        if (!active[static_cast<size_t>(i)]) continue;
        const int root = find(i);
        auto [it, inserted] = root_to_component.try_emplace(root, static_cast<int>(components.size()));
        if (inserted) components.emplace_back();
        components[static_cast<size_t>(it->second)].push_back(i);
    }
    return components;
}

} // namespace poresim
