#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "poresim/network.hpp"

namespace poresim {

/// The five carbon pools tracked per ball.
enum class Pool : int { Mb = 0, Dom = 1, Som = 2, Fom = 3, Co2 = 4 };
inline constexpr int kPoolCount = 5;
const char* pool_name(Pool p);

/// Per-node mass vector: microbial biomass, dissolved / soil / fresh organic
/// matter and respired CO2, all in one consistent mass unit.
struct BioState {
    double mb = 0.0;
    double dom = 0.0;
    double som = 0.0;
    double fom = 0.0;
    double co2 = 0.0;

    double total() const { return mb + dom + som + fom + co2; }
};

/// Named DOM diffusion coefficients, voxel^2/day at 24 um voxels: the value
/// fitted against reference profile data, and the molecular coefficient of
/// DOM in water (6.73e-6 cm^2/s).
inline constexpr double kDcCalibrated = 40000.0;
inline constexpr double kDcMolecularWater = 100000.0;

/// Biological rate constants (per day) plus the DOM diffusion coefficient
/// (voxel^2 per day). kappa_b is the half-saturation constant in the same
/// concentration unit as dom/volume.
struct BioParams {
    double rho = 0.2;     // respiration rate
    double mu = 0.5;      // mortality rate
    double rho_m = 0.55;  // fraction of dead biomass returning to DOM
    double v_fom = 0.3;   // FOM decomposition rate
    double v_som = 0.01;  // SOM decomposition rate
    double v_dom = 9.6;   // maximum growth rate on DOM
    double kappa_b = 0.001;
    double d_c = 40000.0; // DOM diffusion coefficient in water

    /// Arthrobacter sp. 9R parameter set with the calibrated diffusion
    /// coefficient; these are also the defaults above.
    static BioParams arthrobacter_9r() { return {}; }

    void validate() const;
};

/// One explicit Euler transformation step of the five-pool model on a single
/// node. dt in days. Growth follows Monod kinetics on the DOM concentration
/// c = dom/volume; respiration moves biomass to CO2, mortality splits it
/// between DOM (rho_m) and SOM (1 - rho_m), and SOM/FOM decompose into DOM.
/// Every flux appears with opposite signs in exactly two pools, so the total
/// mass is conserved to rounding. Outputs may be negative when dt is too
/// large; that is policed downstream.
BioState transform_node(const BioState& state, double volume, const BioParams& params, double dt_days);

/// Structure-of-arrays state for a whole network. Air-filled nodes keep
/// zero state.
struct PoolGrid {
    std::vector<double> mb, dom, som, fom, co2;

    PoolGrid() = default;
    explicit PoolGrid(std::size_t n)
        : mb(n, 0.0), dom(n, 0.0), som(n, 0.0), fom(n, 0.0), co2(n, 0.0) {}

    std::size_t size() const { return mb.size(); }

    std::vector<double>& pool(Pool p);
    const std::vector<double>& pool(Pool p) const;

    BioState get(std::size_t i) const { return {mb[i], dom[i], som[i], fom[i], co2[i]}; }
    void set(std::size_t i, const BioState& s) {
        mb[i] = s.mb;
        dom[i] = s.dom;
        som[i] = s.som;
        fom[i] = s.fom;
        co2[i] = s.co2;
    }

    /// Fixed-order (ascending node id) sums, for reproducible diagnostics.
    double pool_total(Pool p) const;
    std::array<double, kPoolCount> totals() const;
    double total_mass() const;
};

/// Applies transform_node independently to every water-filled node.
/// Node-parallel; the result is bitwise independent of the partitioning.
PoolGrid transform_all(const PoolGrid& states, const PoreNetwork& net, const WaterMask& water,
                       const BioParams& params, double dt_days);

} // namespace poresim
