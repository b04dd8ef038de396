#include "poresim/placement.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "poresim/errors.hpp"
#include "rng_util.hpp"

namespace poresim {

namespace {

std::vector<double> proportional_split(const PoreNetwork& net, const std::vector<int>& targets,
                                       double total) {
    std::vector<double> out(static_cast<size_t>(net.node_count()), 0.0);
    if (targets.empty() || total == 0.0) return out;

    double volume_sum = 0.0;
    int largest = targets.front();
    for (int i : targets) {
        volume_sum += net.node(i).volume;
        if (net.node(i).volume > net.node(largest).volume) largest = i;
    }
    double assigned = 0.0;
    for (int i : targets) {
        out[static_cast<size_t>(i)] = total * (net.node(i).volume / volume_sum);
        assigned += out[static_cast<size_t>(i)];
    }
    // Exact total: fold the rounding residual into the largest ball.
    out[static_cast<size_t>(largest)] += total - assigned;
    return out;
}

} // namespace

std::vector<double> place_dom_uniform(const PoreNetwork& net, const WaterMask& water, double total) {
    if (total < 0.0) throw DomainError("total mass must be nonnegative");
    std::vector<int> targets;
    for (int i = 0; i < net.node_count(); ++i)
        if (water[static_cast<size_t>(i)]) targets.push_back(i);
    if (targets.empty()) throw NoWaterError("no water-filled balls to place DOM in");
    return proportional_split(net, targets, total);
}

std::vector<double> place_dom_slab(const PoreNetwork& net, const WaterMask& water, double total,
                                   double z_min, double z_max) {
    if (total < 0.0) throw DomainError("total mass must be nonnegative");
    if (!(z_max > z_min)) throw DomainError("slab requires z_max > z_min");
    std::vector<int> targets;
    for (int i = 0; i < net.node_count(); ++i) {
        if (!water[static_cast<size_t>(i)]) continue;
        const BallNode& b = net.node(i);
        if (b.center.z + b.radius >= z_min && b.center.z - b.radius < z_max) targets.push_back(i);
    }
    if (targets.empty()) throw NoWaterError("no water-filled balls intersect the slab");
    return proportional_split(net, targets, total);
}

std::vector<double> place_dom_single_ball(const PoreNetwork& net, const WaterMask& water,
                                          double total, int ball_id, std::uint64_t seed) {
    if (total < 0.0) throw DomainError("total mass must be nonnegative");
    std::vector<int> candidates;
    for (int i = 0; i < net.node_count(); ++i)
        if (water[static_cast<size_t>(i)]) candidates.push_back(i);
    if (candidates.empty()) throw NoWaterError("no water-filled balls to place DOM in");

    int target;
    if (ball_id >= 0) {
        if (ball_id >= net.node_count() || !water[static_cast<size_t>(ball_id)])
            throw DomainError("ball " + std::to_string(ball_id) + " is not a water-filled node");
        target = ball_id;
    } else {
        std::mt19937_64 rng(seed);
        target = candidates[static_cast<size_t>(bounded_pick(rng, candidates.size()))];
    }
    std::vector<double> out(static_cast<size_t>(net.node_count()), 0.0);
    out[static_cast<size_t>(target)] = total;
    return out;
}

std::vector<double> place_mb_spots(const PoreNetwork& net, const WaterMask& water, int n_spots,
                                   double total, std::uint64_t seed) {
    if (n_spots < 1) throw DomainError("spot count must be at least 1");
    if (total < 0.0) throw DomainError("total mass must be nonnegative");
    std::vector<int> candidates;
    for (int i = 0; i < net.node_count(); ++i)
        if (water[static_cast<size_t>(i)]) candidates.push_back(i);
    if (n_spots > static_cast<int>(candidates.size()))
        throw TooManySpots("requested " + std::to_string(n_spots) + " spots but only " +
                           std::to_string(candidates.size()) + " water-filled balls exist");

    // Partial Fisher-Yates: the first n_spots entries become the sample.
    std::mt19937_64 rng(seed);
    for (int k = 0; k < n_spots; ++k) {
        const auto pick =
            static_cast<size_t>(k) + static_cast<size_t>(bounded_pick(rng, candidates.size() - static_cast<size_t>(k)));
        std::swap(candidates[static_cast<size_t>(k)], candidates[pick]);
    }

    std::vector<double> out(static_cast<size_t>(net.node_count()), 0.0);
    const double each = total / static_cast<double>(n_spots);
    for (int k = 0; k < n_spots; ++k) out[static_cast<size_t>(candidates[static_cast<size_t>(k)])] = each;
    return out;
}

} // namespace poresim
