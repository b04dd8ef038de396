#pragma once

#include "poresim/network.hpp"

namespace poresim {

struct DrainageResult {
    double threshold = 0.0;
    WaterMask water_mask;
    double achieved_saturation = 0.0;

    int water_count() const {
        int n = 0;
        for (auto w : water_mask) n += (w != 0);
        return n;
    }
};

/// Drains the network by radius thresholding: balls with radius <= threshold
/// stay water-filled, larger balls are emptied. Picks the smallest threshold
/// from the discrete set of node radii whose water-volume fraction reaches
/// the target; the achieved saturation is reported so callers can see the
/// discretization gap. target = 1 keeps every ball.
DrainageResult drain_to_saturation(const PoreNetwork& net, double target);

} // namespace poresim
