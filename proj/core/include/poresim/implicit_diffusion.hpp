#pragma once

#include <vector>

#include "poresim/biology.hpp"
#include "poresim/explicit_diffusion.hpp"
#include "poresim/network.hpp"
#include "poresim/sparse.hpp"

namespace poresim {

/// Assembled implicit Euler system for one connected water component:
///   A u = c,   A = V + L_theta,   theta_ij = d_c * (s_ij / d_ij) * dt.
/// Row i carries v_i + sum_j theta_ij on the diagonal and -theta_ij off it,
/// so A 1 = v row by row; that identity is what makes the step conservative
/// and is checked at assembly. u holds the new concentrations, c the current
/// masses.
struct ImplicitSystem {
    SparseSymmetricMatrix matrix;
    std::vector<double> volumes;  // component-local v_i
    std::vector<int> node_order;  // local index -> global node id

    struct ArcTheta {
        int local_i;
        int local_j;
        double theta;
    };
    std::vector<ArcTheta> thetas;

    int size() const { return static_cast<int>(node_order.size()); }
};

/// Builds the system for one component (dt in days; dt = 0 degenerates to
/// A = V, the identity step). Arcs leaving the component are excluded.
ImplicitSystem assemble(const PoreNetwork& net, const WaterMask& water,
                        const std::vector<int>& component, double d_c, double dt_days);

struct ImplicitStepStats {
    int cg_iterations = 0;
    double cg_residual = 0.0;
    double conservation_drift = 0.0; // relative, before repair
};

/// One implicit diffusion step on a component: solves A u = c with
/// Jacobi-preconditioned CG and returns the new masses v_i * u_i. Small
/// solver-induced negatives are clamped and the total is restored by a
/// proportional rescale whenever the relative drift exceeds 1e-14.
/// Unconditionally stable: any dt yields nonnegative output for nonnegative
/// input.
std::vector<double> diffusion_step_implicit(const std::vector<double>& mass,
                                            const ImplicitSystem& system,
                                            const PcgOptions& options = {},
                                            ImplicitStepStats* stats = nullptr);

/// Component decomposition plus per-component systems, cached across steps
/// while (d_c, dt) stay unchanged. The network and mask must outlive the
/// workspace and stay fixed (static geometry).
class ImplicitWorkspace {
public:
    ImplicitWorkspace(const PoreNetwork& net, const WaterMask& water);

    /// Re-assembles the systems if (d_c, dt) changed since the last call.
    void prepare(double d_c, double dt_days);

    const std::vector<std::vector<int>>& components() const { return components_; }
    const std::vector<ImplicitSystem>& systems() const { return systems_; }

    /// Implicit step of the full per-node DOM vector (component-wise solves).
    /// Returns the largest CG iteration count across components in *stats
    /// when given.
    std::vector<double> step(const std::vector<double>& dom, const PcgOptions& options,
                             ImplicitStepStats* stats = nullptr);

private:
    const PoreNetwork& net_;
    const WaterMask& water_;
    std::vector<std::vector<int>> components_;
    std::vector<ImplicitSystem> systems_;
    double d_c_ = -1.0;
    double dt_days_ = -1.0;
};

struct ImplicitRunConfig {
    double dt_diffusion_s = 10.0;
    double dt_transform_s = 10.0;
    double p_neg = 0.01;
    int max_backtracks = 40;
    PcgOptions pcg;

    void validate() const;
};

/// Asynchronous coupling with the implicit diffusion step: per macro step,
/// dt_transform/dt_diffusion implicit solves followed by one explicit
/// transformation step. Diffusion needs no negativity policing (the implicit
/// step is clamped nonnegative); the transformation result is policed like in
/// the explicit scheme and backtracking halves both time steps.
PoolGrid run_implicit_async(PoolGrid states, const PoreNetwork& net, const WaterMask& water,
                            const BioParams& params, const ImplicitRunConfig& cfg,
                            double t_end_days, RunStats* stats = nullptr,
                            const CommitHook& hook = {});

} // namespace poresim
