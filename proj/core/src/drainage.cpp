#include "poresim/drainage.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "poresim/errors.hpp"

namespace poresim {

DrainageResult drain_to_saturation(const PoreNetwork& net, double target) {
    if (net.node_count() == 0) throw EmptyNetworkError("cannot drain an empty network");
    if (!(target > 0.0) || target > 1.0)
        throw DomainError("saturation target must be in (0, 1], got " + std::to_string(target));

    // Volume-sorted sweep over the discrete radius set.
    std::vector<int> order(static_cast<size_t>(net.node_count()));
    for (int i = 0; i < net.node_count(); ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&net](int a, int b) { return net.node(a).radius < net.node(b).radius; });

    const double total = net.total_volume();
    double water_volume = 0.0;
    double threshold = net.node(order.back()).radius;
    double achieved = 1.0;
    for (size_t k = 0; k < order.size();) {
        const double r = net.node(order[k]).radius;
        while (k < order.size() && net.node(order[k]).radius == r) {
            water_volume += net.node(order[k]).volume;
            ++k;
        }
        const double saturation = water_volume / total;
        if (saturation >= target) {
            threshold = r;
            achieved = saturation;
            break;
        }
    }

    DrainageResult result;
    result.threshold = threshold;
    result.achieved_saturation = achieved;
    result.water_mask.resize(static_cast<size_t>(net.node_count()));
    for (int i = 0; i < net.node_count(); ++i)
        result.water_mask[static_cast<size_t>(i)] = net.node(i).radius <= threshold ? 1 : 0;
    return result;
}

} // namespace poresim
