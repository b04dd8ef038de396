#pragma once

#include <array>
#include <functional>
#include <vector>

#include "poresim/biology.hpp"
#include "poresim/errors.hpp"
#include "poresim/network.hpp"

namespace poresim {

enum class Coupling { Synchronous, Asynchronous };

/// Order of the two operators inside one asynchronous macro step. The
/// diffusion-first order is the one used for reported results; the
/// alternative is kept behind this switch.
enum class StepOrder { DiffusionFirst, TransformFirst };

struct ExplicitConfig {
    double dt_diffusion_s = 0.3;
    double dt_transform_s = 10.0;
    /// Maximum tolerated negativity fraction H/M per species.
    double p_neg = 0.01;
    /// Total dt halvings allowed over a run before giving up.
    int max_backtracks = 40;
    Coupling coupling = Coupling::Asynchronous;
    StepOrder order = StepOrder::DiffusionFirst;
    /// When on, the halved time step is doubled back toward its configured
    /// value after redouble_quiet_steps committed steps without a backtrack.
    bool redouble_after_quiet = false;
    int redouble_quiet_steps = 16;

    /// Throws ConfigError on unusable values; logs a warning when p_neg is
    /// outside the recommended [0.01, 0.05] band or when dt_transform is not
    /// an integer multiple of dt_diffusion in asynchronous mode.
    void validate() const;
};

/// Fick's first law on one arc: mass gained by node i over dt,
///   F_ij = -d_c * s_ij * (c_i - c_j) / d_ij * dt.
/// Exactly antisymmetric under exchange of the endpoints. d_c and dt must be
/// in consistent units (voxel^2/day and days in this engine).
double fick_flow(double c_i, double c_j, double s_ij, double d_ij, double d_c, double dt_days);

/// One explicit Euler diffusion step of the DOM masses over water-water arcs.
/// Exactly conservative by construction (each arc flow enters both endpoint
/// updates with opposite sign); may produce negatives when dt exceeds the
/// stability bound — policing is the caller's job.
std::vector<double> diffusion_step_explicit(const std::vector<double>& dom, const PoreNetwork& net,
                                            const WaterMask& water, double d_c, double dt_days);

/// Per-species negativity H = -sum_i min(0, y_i) and total M = sum_i y_i.
struct NegativityReport {
    std::array<double, kPoolCount> negativity{}; // H, >= 0
    std::array<double, kPoolCount> total{};      // M

    /// First species whose negativity reaches p_neg * M (a species with
    /// H = 0 never qualifies), or -1.
    int species_exceeding(double p_neg) const;
    bool any_negative() const;
};

NegativityReport negativity(const PoolGrid& masses);

/// H and M for a single species vector.
void species_negativity(const std::vector<double>& mass, double& H, double& M);

/// Zeroes the strictly negative entries and debits the same total mass from
/// the strictly positive entries proportionally to their concentration
/// mass/volume. Caller must have checked H < p_neg * M. Throws RepairOverdraw
/// when a debited entry would itself go negative (or there are no donors).
void reallocate_species(std::vector<double>& mass, const std::vector<double>& volumes, double H);

/// Applies reallocate_species to every species with nonzero negativity.
PoolGrid reallocate_negatives(PoolGrid masses, const std::vector<double>& volumes,
                              const NegativityReport& report);

/// Per-node volumes of a network, indexed by node id.
std::vector<double> node_volumes(const PoreNetwork& net);

/// One synchronous explicit step: biological deltas and diffusion deltas are
/// both evaluated on the input state and applied together, then the
/// negativity policy runs (reallocation, or BacktrackRequired when the
/// threshold is hit).
PoolGrid step_synchronous(const PoolGrid& states, const PoreNetwork& net, const WaterMask& water,
                          const BioParams& params, const ExplicitConfig& cfg, double dt_days);

/// One asynchronous macro step: dt_transform/dt_diffusion diffusion sub-steps
/// followed by one transformation step (or the reverse order), with the
/// negativity policy after every sub-step.
PoolGrid step_asynchronous(const PoolGrid& states, const PoreNetwork& net, const WaterMask& water,
                           const BioParams& params, const ExplicitConfig& cfg);

struct RunStats {
    long long macro_steps = 0;
    int backtracks = 0;
    double dt_diffusion_s_final = 0.0;
    double dt_transform_s_final = 0.0;
    int max_cg_iterations = 0; // implicit runs only
};

using CommitHook = std::function<void(double t_days, const PoolGrid& states)>;

/// Advances the explicit scheme to t_end. On BacktrackRequired the failing
/// step is retried with a halved time step and the run continues with the
/// halved step (diffusion-phase failures halve only dt_diffusion, keeping
/// dt_transform; transform-phase failures halve both). Throws StepCollapse
/// after max_backtracks halvings. The hook runs after every committed step.
PoolGrid run_with_backtracking(PoolGrid states, const PoreNetwork& net, const WaterMask& water,
                               const BioParams& params, const ExplicitConfig& cfg,
                               double t_end_days, RunStats* stats = nullptr,
                               const CommitHook& hook = {});

} // namespace poresim
