#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace poresim {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

Vec3 operator-(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
double distance(const Vec3& a, const Vec3& b);

/// Volume of a ball of the given radius.
double ball_volume(double radius);

/// Area of the contact disk between two adjacent balls: alpha * pi * min(r_i, r_j)^2.
/// The disk radius is the smaller of the two ball radii; alpha in (0, 1] is the
/// calibrated correction factor. Throws DomainError on non-positive radii or
/// alpha outside (0, 1].
double compute_contact_area(double r_i, double r_j, double alpha);

inline constexpr double kDefaultContactAlpha = 0.6;

/// One ball of the network. Geometry is fixed voxel-unit data; `external_id`
/// preserves the id found in the input file (ids are remapped to dense
/// 0-based indices on load).
struct BallNode {
    int id = 0;
    Vec3 center;
    double radius = 0.0;
    double volume = 0.0;
    long long external_id = 0;
};

/// Non-oriented adjacency between two balls, canonically stored with i < j.
/// `distance` is the Euclidean distance between the two centers, `contact_area`
/// the area of the shared contact disk. Both are symmetric by construction.
struct AdjacencyArc {
    int i = 0;
    int j = 0;
    double distance = 0.0;
    double contact_area = 0.0;
};

using WaterMask = std::vector<std::uint8_t>;

/// Attributed relational graph of balls. Immutable after construction; the
/// constructor validates every invariant (positive radii/volumes/arc
/// attributes, valid endpoints, no self-loops or duplicate arcs) and builds
/// the per-node incidence index.
class PoreNetwork {
public:
    PoreNetwork() = default;
    PoreNetwork(std::vector<BallNode> nodes, std::vector<AdjacencyArc> arcs);

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int arc_count() const { return static_cast<int>(arcs_.size()); }

    const std::vector<BallNode>& nodes() const { return nodes_; }
    const std::vector<AdjacencyArc>& arcs() const { return arcs_; }
    const BallNode& node(int id) const { return nodes_[static_cast<size_t>(id)]; }
    const AdjacencyArc& arc(int idx) const { return arcs_[static_cast<size_t>(idx)]; }

    /// Indices into arcs() of the arcs incident to `node`.
    std::span<const int> incident_arcs(int node) const;

    /// Total ball volume.
    double total_volume() const;

    /// Copy of this network with every contact area recomputed from the
    /// min-radius disk rule at the given alpha.
    PoreNetwork with_contact_areas(double alpha) const;

private:
    void validate() const;
    void build_incidence();

    std::vector<BallNode> nodes_;
    std::vector<AdjacencyArc> arcs_;
    std::vector<int> incidence_offsets_;
    std::vector<int> incidence_arcs_;
};

/// Derives arcs between balls whose surfaces touch or weakly intersect:
/// |c_i - c_j| <= r_i + r_j + epsilon. Distance is the center distance and
/// contact area follows the min-radius disk rule at `alpha`. Uses a uniform
/// spatial hash so large networks stay tractable.
std::vector<AdjacencyArc> derive_arcs_by_tangency(const std::vector<BallNode>& nodes,
                                                  double alpha = kDefaultContactAlpha,
                                                  double epsilon = 1e-6);

/// Partition of the active nodes into maximal connected sets under arcs whose
/// both endpoints are active. Components are ordered by smallest contained
/// node id; node ids inside a component are ascending.
std::vector<std::vector<int>> connected_components(const PoreNetwork& net, const WaterMask& active);

} // namespace poresim
