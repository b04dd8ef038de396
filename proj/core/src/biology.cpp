#include "poresim/biology.hpp"

#include <string>

#include "poresim/errors.hpp"
#include "poresim/parallel.hpp"

namespace poresim {

const char* pool_name(Pool p) {
    switch (p) {
        case Pool::Mb: return "mb";
        case Pool::Dom: return "dom";
        case Pool::Som: return "som";
        case Pool::Fom: return "fom";
        case Pool::Co2: return "co2";
    }
    return "?";
}

void BioParams::validate() const {
    if (rho < 0 || mu < 0 || v_fom < 0 || v_som < 0 || v_dom < 0)
        throw DomainError("biological rates must be nonnegative");
    if (rho_m < 0.0 || rho_m > 1.0)
        throw DomainError("rho_m must be in [0, 1], got " + std::to_string(rho_m));
    if (!(kappa_b > 0.0)) throw DomainError("kappa_b must be positive");
    if (d_c < 0.0) throw DomainError("diffusion coefficient must be nonnegative");
}

BioState transform_node(const BioState& x, double volume, const BioParams& p, double dt_days) {
    // Monod uptake on the DOM concentration; exactly zero when dom is zero.
    double growth = 0.0;
    if (x.dom != 0.0) {
        const double c_dom = x.dom / volume;
        growth = p.v_dom * c_dom / (p.kappa_b + c_dom) * x.mb * dt_days;
    }
    const double respiration = p.rho * x.mb * dt_days;
    const double mortality = p.mu * x.mb * dt_days;
    const double som_to_dom = p.v_som * x.som * dt_days;
    const double fom_to_dom = p.v_fom * x.fom * dt_days;

    BioState y;
    y.mb = x.mb - respiration - mortality + growth;
    y.dom = x.dom + p.rho_m * mortality - growth + som_to_dom + fom_to_dom;
    y.som = x.som + (1.0 - p.rho_m) * mortality - som_to_dom;
    y.fom = x.fom - fom_to_dom;
    y.co2 = x.co2 + respiration;
    return y;
}

std::vector<double>& PoolGrid::pool(Pool p) {
    switch (p) {
        case Pool::Mb: return mb;
        case Pool::Dom: return dom;
        case Pool::Som: return som;
        case Pool::Fom: return fom;
        case Pool::Co2: return co2;
    }
    return mb;
}

const std::vector<double>& PoolGrid::pool(Pool p) const {
    return const_cast<PoolGrid*>(this)->pool(p);
}

double PoolGrid::pool_total(Pool p) const {
    const std::vector<double>& v = pool(p);
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum;
}

std::array<double, kPoolCount> PoolGrid::totals() const {
    return {pool_total(Pool::Mb), pool_total(Pool::Dom), pool_total(Pool::Som),
            pool_total(Pool::Fom), pool_total(Pool::Co2)};
}

double PoolGrid::total_mass() const {
    double sum = 0.0;
    for (double t : totals()) sum += t;
    return sum;
}

PoolGrid transform_all(const PoolGrid& states, const PoreNetwork& net, const WaterMask& water,
                       const BioParams& params, double dt_days) {
    if (states.size() != static_cast<size_t>(net.node_count()))
        throw DimensionMismatch("state size does not match node count");
    PoolGrid out = states;
    parallel_for(states.size(), [&](std::size_t i) {
        if (!water[i]) return;
        out.set(i, transform_node(states.get(i), net.node(static_cast<int>(i)).volume, params,
                                  dt_days));
    });
    return out;
}

} // namespace poresim
