#include "poresim/implicit_diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poresim/log.hpp"
#include "poresim/units.hpp"

namespace poresim {

namespace {

constexpr double kTimeEps = 1e-12;     // days
constexpr double kDriftRepair = 1e-14; // relative drift triggering the rescale

} // namespace

ImplicitSystem assemble(const PoreNetwork& net, const WaterMask& water,
                        const std::vector<int>& component, double d_c, double dt_days) {
    if (dt_days < 0.0) throw DomainError("assemble: dt must be nonnegative");

    ImplicitSystem sys;
    sys.node_order = component;
    const int p = sys.size();
    sys.volumes.resize(static_cast<size_t>(p));
    std::vector<int> local_of(static_cast<size_t>(net.node_count()), -1);
    for (int k = 0; k < p; ++k) {
        const int g = component[static_cast<size_t>(k)];
        local_of[static_cast<size_t>(g)] = k;
        sys.volumes[static_cast<size_t>(k)] = net.node(g).volume;
    }

    std::vector<double> diag(sys.volumes.begin(), sys.volumes.end());
    std::vector<Triplet> triplets;
    for (int k = 0; k < p; ++k) {
        const int g = component[static_cast<size_t>(k)];
        for (int arc_idx : net.incident_arcs(g)) {
            const AdjacencyArc& a = net.arc(arc_idx);
            const int other = a.i == g ? a.j : a.i;
            if (!water[static_cast<size_t>(other)]) continue;
            const int lo = local_of[static_cast<size_t>(other)];
            if (lo < 0) continue; // arc leaves the component
            const double theta = d_c * (a.contact_area / a.distance) * dt_days;
            diag[static_cast<size_t>(k)] += theta;
            if (theta != 0.0) triplets.push_back({k, lo, -theta});
            if (other > g) sys.thetas.push_back({k, lo, theta});
        }
    }
    for (int k = 0; k < p; ++k) triplets.push_back({k, k, diag[static_cast<size_t>(k)]});
    sys.matrix = SparseSymmetricMatrix::from_triplets(p, std::move(triplets));

    // Row-sum identity A 1 = v: the off-diagonals must cancel the theta sum.
    std::vector<double> ones(static_cast<size_t>(p), 1.0);
    std::vector<double> row_sums = sys.matrix.matvec(ones);
    for (int k = 0; k < p; ++k) {
        const double v = sys.volumes[static_cast<size_t>(k)];
        const double scale = std::abs(diag[static_cast<size_t>(k)]) + std::abs(v);
        if (std::abs(row_sums[static_cast<size_t>(k)] - v) > 1e-12 * scale)
            throw ValidationError("assembly row-sum identity violated at local row " +
                                  std::to_string(k));
    }
    return sys;
}

std::vector<double> diffusion_step_implicit(const std::vector<double>& mass,
                                            const ImplicitSystem& system, const PcgOptions& options,
                                            ImplicitStepStats* stats) {
    if (static_cast<int>(mass.size()) != system.size())
        throw DimensionMismatch("diffusion_step_implicit: mass vector does not match system size");

    const PcgResult solve = pcg_solve(system.matrix, mass, options);
    std::vector<double> out(mass.size());
    double sum_old = 0.0;
    double sum_new = 0.0;
    for (size_t i = 0; i < mass.size(); ++i) {
        out[i] = system.volumes[i] * solve.x[i];
        if (out[i] < 0.0) out[i] = 0.0; // solver noise; exact arithmetic keeps u >= 0
        sum_old += mass[i];
        sum_new += out[i];
    }

    double drift = 0.0;
    if (sum_old != 0.0 && sum_new != 0.0) {
        drift = (sum_new - sum_old) / sum_old;
        if (std::abs(drift) > kDriftRepair) {
            const double scale = sum_old / sum_new;
            for (double& m : out) m *= scale;
            log::debug("implicit step conservation drift " + std::to_string(drift) + " repaired");
        }
    }

    if (stats != nullptr) {
        stats->cg_iterations = solve.iterations;
        stats->cg_residual = solve.final_residual;
        stats->conservation_drift = drift;
    }
    return out;
}

ImplicitWorkspace::ImplicitWorkspace(const PoreNetwork& net, const WaterMask& water)
    : net_(net), water_(water), components_(connected_components(net, water)) {}

void ImplicitWorkspace::prepare(double d_c, double dt_days) {
    if (d_c == d_c_ && dt_days == dt_days_ && !systems_.empty()) return;
    systems_.clear();
    systems_.reserve(components_.size());
    for (const auto& component : components_)
        systems_.push_back(assemble(net_, water_, component, d_c, dt_days));
    d_c_ = d_c;
    dt_days_ = dt_days;
}

std::vector<double> ImplicitWorkspace::step(const std::vector<double>& dom,
                                            const PcgOptions& options, ImplicitStepStats* stats) {
    if (systems_.empty() && !components_.empty())
        throw DomainError("ImplicitWorkspace::step called before prepare()");
    std::vector<double> out = dom;
    ImplicitStepStats worst;
    for (const ImplicitSystem& sys : systems_) {
        std::vector<double> local(static_cast<size_t>(sys.size()));
        for (int k = 0; k < sys.size(); ++k)
            local[static_cast<size_t>(k)] = dom[static_cast<size_t>(sys.node_order[static_cast<size_t>(k)])];
        ImplicitStepStats s;
        local = diffusion_step_implicit(local, sys, options, &s);
        worst.cg_iterations = std::max(worst.cg_iterations, s.cg_iterations);
        worst.cg_residual = std::max(worst.cg_residual, s.cg_residual);
        worst.conservation_drift =
            std::max(worst.conservation_drift, std::abs(s.conservation_drift));
        for (int k = 0; k < sys.size(); ++k)
            out[static_cast<size_t>(sys.node_order[static_cast<size_t>(k)])] = local[static_cast<size_t>(k)];
    }
    if (stats != nullptr) *stats = worst;
    return out;
}

void ImplicitRunConfig::validate() const {
    if (!(dt_diffusion_s > 0.0) || !(dt_transform_s > 0.0))
        throw ConfigError("time steps must be positive");
    const double ratio = dt_transform_s / dt_diffusion_s;
    if (std::abs(ratio - std::llround(ratio)) > 1e-9 * ratio || std::llround(ratio) < 1)
        throw ConfigError("dt_transform must be an integer multiple of dt_diffusion");
    if (!(p_neg > 0.0) || p_neg >= 1.0) throw ConfigError("p_neg must be in (0, 1)");
    if (max_backtracks < 0) throw ConfigError("max_backtracks must be nonnegative");
}

PoolGrid run_implicit_async(PoolGrid states, const PoreNetwork& net, const WaterMask& water,
                            const BioParams& params, const ImplicitRunConfig& cfg,
                            double t_end_days, RunStats* stats, const CommitHook& hook) {
    cfg.validate();
    params.validate();
    if (!(t_end_days > 0.0)) throw DomainError("t_end must be positive");

    ImplicitWorkspace workspace(net, water);
    const std::vector<double> volumes = node_volumes(net);

    double dt_diff_s = cfg.dt_diffusion_s;
    double dt_tr_s = cfg.dt_transform_s;
    int halvings = 0;
    long long committed = 0;
    int max_cg = 0;
    double t = 0.0;

    while (t < t_end_days - kTimeEps) {
        const double remaining_s = units::days_to_seconds(t_end_days - t);
        const double step_s = remaining_s >= dt_tr_s * (1.0 - 1e-9) ? dt_tr_s : remaining_s;
        const auto n_sub = std::max<long long>(1, static_cast<long long>(std::ceil(step_s / dt_diff_s - 1e-9)));
        const double sub_s = step_s / static_cast<double>(n_sub);
        workspace.prepare(params.d_c, units::seconds_to_days(sub_s));

        try {
            PoolGrid next = states;
            for (long long k = 0; k < n_sub; ++k) {
                ImplicitStepStats step_stats;
                next.dom = workspace.step(next.dom, cfg.pcg, &step_stats);
                max_cg = std::max(max_cg, step_stats.cg_iterations);
            }
            next = transform_all(next, net, water, params, units::seconds_to_days(step_s));
            const NegativityReport report = negativity(next);
            const int bad = report.species_exceeding(cfg.p_neg);
            if (bad >= 0)
                throw BacktrackRequired(bad, report.negativity[static_cast<size_t>(bad)],
                                        report.total[static_cast<size_t>(bad)], StepPhase::Transform);
            if (report.any_negative()) next = reallocate_negatives(std::move(next), volumes, report);

            states = std::move(next);
            t += units::seconds_to_days(step_s);
            ++committed;
            if (hook) hook(t, states);
        } catch (const BacktrackRequired& b) {
            if (++halvings > cfg.max_backtracks)
                throw StepCollapse("backtracking exceeded " + std::to_string(cfg.max_backtracks) +
                                   " halvings at t=" + std::to_string(t) + " d: " + b.what());
            dt_tr_s *= 0.5;
            dt_diff_s *= 0.5;
            log::info("implicit run backtrack #" + std::to_string(halvings) +
                      ", dt_transform=" + std::to_string(dt_tr_s) + " s");
        } catch (const RepairOverdraw& r) {
            if (++halvings > cfg.max_backtracks)
                throw StepCollapse("backtracking exceeded " + std::to_string(cfg.max_backtracks) +
                                   " halvings at t=" + std::to_string(t) + " d: " + r.what());
            dt_tr_s *= 0.5;
            dt_diff_s *= 0.5;
        }
    }

    if (stats != nullptr) {
        stats->macro_steps = committed;
        stats->backtracks = halvings;
        stats->dt_diffusion_s_final = dt_diff_s;
        stats->dt_transform_s_final = dt_tr_s;
        stats->max_cg_iterations = max_cg;
    }
    return states;
}

} // namespace poresim
