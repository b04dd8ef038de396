#include "poresim/explicit_diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "poresim/log.hpp"
#include "poresim/units.hpp"

namespace poresim {

namespace {

constexpr double kTimeEps = 1e-12; // days

long long substep_count(double dt_transform_s, double dt_diffusion_s) {
    const double ratio = dt_transform_s / dt_diffusion_s;
    const long long n = std::llround(ratio);
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) return -1;
    return n;
}

} // namespace

void ExplicitConfig::validate() const {
    if (!(dt_diffusion_s > 0.0) || !(dt_transform_s > 0.0))
        throw ConfigError("time steps must be positive");
    if (!(p_neg > 0.0) || p_neg >= 1.0)
        throw ConfigError("p_neg must be in (0, 1), got " + std::to_string(p_neg));
    if (p_neg < 0.01 || p_neg > 0.05)
        log::warn("p_neg=" + std::to_string(p_neg) + " is outside the recommended [0.01, 0.05]");
    if (max_backtracks < 0) throw ConfigError("max_backtracks must be nonnegative");
    if (coupling == Coupling::Asynchronous && substep_count(dt_transform_s, dt_diffusion_s) < 0)
        throw ConfigError("dt_transform (" + std::to_string(dt_transform_s) +
                          "s) must be an integer multiple of dt_diffusion (" +
                          std::to_string(dt_diffusion_s) + "s)");
}

double fick_flow(double c_i, double c_j, double s_ij, double d_ij, double d_c, double dt_days) {
    return -d_c * s_ij * (c_i - c_j) / d_ij * dt_days;
}

std::vector<double> diffusion_step_explicit(const std::vector<double>& dom, const PoreNetwork& net,
                                            const WaterMask& water, double d_c, double dt_days) {
    const size_t n = static_cast<size_t>(net.node_count());
    if (dom.size() != n || water.size() != n)
        throw DimensionMismatch("dom/water size does not match node count");

    std::vector<double> conc(n, 0.0);
    for (size_t i = 0; i < n; ++i)
        if (water[i]) conc[i] = dom[i] / net.node(static_cast<int>(i)).volume;

    std::vector<double> out = dom;
    for (const AdjacencyArc& a : net.arcs()) {
        const size_t i = static_cast<size_t>(a.i);
        const size_t j = static_cast<size_t>(a.j);
        if (!water[i] || !water[j]) continue;
        const double flow = fick_flow(conc[i], conc[j], a.contact_area, a.distance, d_c, dt_days);
        out[i] += flow;
        out[j] -= flow;
    }
    return out;
}

int NegativityReport::species_exceeding(double p_neg) const {
    for (int s = 0; s < kPoolCount; ++s) {
        const size_t k = static_cast<size_t>(s);
        if (negativity[k] > 0.0 && negativity[k] >= p_neg * total[k]) return s;
    }
    return -1;
}

bool NegativityReport::any_negative() const {
    for (double h : negativity)
        if (h > 0.0) return true;
    return false;
}

void species_negativity(const std::vector<double>& mass, double& H, double& M) {
    H = 0.0;
    M = 0.0;
    for (double y : mass) {
        M += y;
        if (y < 0.0) H -= y;
    }
}

NegativityReport negativity(const PoolGrid& masses) {
    NegativityReport report;
    for (int s = 0; s < kPoolCount; ++s) {
        const size_t k = static_cast<size_t>(s);
        species_negativity(masses.pool(static_cast<Pool>(s)), report.negativity[k], report.total[k]);
    }
    return report;
}

void reallocate_species(std::vector<double>& mass, const std::vector<double>& volumes, double H) {
    if (H == 0.0) return;
    if (mass.size() != volumes.size())
        throw DimensionMismatch("mass/volume size mismatch in reallocation");

    double donor_concentration_sum = 0.0;
    for (size_t i = 0; i < mass.size(); ++i)
        if (mass[i] > 0.0) donor_concentration_sum += mass[i] / volumes[i];
    if (!(donor_concentration_sum > 0.0))
        throw RepairOverdraw("no strictly positive donors to cover negativity " + std::to_string(H));

    for (size_t i = 0; i < mass.size(); ++i) {
        if (mass[i] > 0.0) {
            const double debit = (mass[i] / volumes[i]) / donor_concentration_sum * H;
            const double repaired = mass[i] - debit;
            if (repaired < 0.0)
                throw RepairOverdraw("proportional debit " + std::to_string(debit) +
                                     " exceeds donor mass " + std::to_string(mass[i]));
            mass[i] = repaired;
        } else if (mass[i] < 0.0) {
            mass[i] = 0.0;
        }
    }
}

PoolGrid reallocate_negatives(PoolGrid masses, const std::vector<double>& volumes,
                              const NegativityReport& report) {
    for (int s = 0; s < kPoolCount; ++s) {
        const double H = report.negativity[static_cast<size_t>(s)];
        if (H > 0.0) reallocate_species(masses.pool(static_cast<Pool>(s)), volumes, H);
    }
    return masses;
}

std::vector<double> node_volumes(const PoreNetwork& net) {
    std::vector<double> v(static_cast<size_t>(net.node_count()));
    for (int i = 0; i < net.node_count(); ++i) v[static_cast<size_t>(i)] = net.node(i).volume;
    return v;
}

namespace {

/// Negativity policy for a full grid: throw on threshold, else repair.
PoolGrid police(PoolGrid states, const std::vector<double>& volumes, double p_neg, StepPhase phase) {
    const NegativityReport report = negativity(states);
    const int bad = report.species_exceeding(p_neg);
    if (bad >= 0)
        throw BacktrackRequired(bad, report.negativity[static_cast<size_t>(bad)],
                                report.total[static_cast<size_t>(bad)], phase);
    if (report.any_negative()) return reallocate_negatives(std::move(states), volumes, report);
    return states;
}

/// Negativity policy for the DOM vector alone (pure diffusion sub-steps).
void police_dom(std::vector<double>& dom, const std::vector<double>& volumes, double p_neg) {
    double H, M;
    species_negativity(dom, H, M);
    if (H > 0.0 && H >= p_neg * M)
        throw BacktrackRequired(static_cast<int>(Pool::Dom), H, M, StepPhase::Diffusion);
    if (H > 0.0) reallocate_species(dom, volumes, H);
}

} // namespace

PoolGrid step_synchronous(const PoolGrid& states, const PoreNetwork& net, const WaterMask& water,
                          const BioParams& params, const ExplicitConfig& cfg, double dt_days) {
    PoolGrid out = transform_all(states, net, water, params, dt_days);
    // Diffusion deltas come from the same input state as the biology deltas.
    std::vector<double> diffused = diffusion_step_explicit(states.dom, net, water, params.d_c, dt_days);
    for (size_t i = 0; i < out.size(); ++i) out.dom[i] += diffused[i] - states.dom[i];
    return police(std::move(out), node_volumes(net), cfg.p_neg, StepPhase::Combined);
}

PoolGrid step_asynchronous(const PoolGrid& states, const PoreNetwork& net, const WaterMask& water,
                           const BioParams& params, const ExplicitConfig& cfg) {
    const long long n_sub = substep_count(cfg.dt_transform_s, cfg.dt_diffusion_s);
    if (n_sub < 0)
        throw ConfigError("dt_transform must be an integer multiple of dt_diffusion");
    const double dt_diff_days = units::seconds_to_days(cfg.dt_diffusion_s);
    const double dt_tr_days = units::seconds_to_days(cfg.dt_transform_s);
    const std::vector<double> volumes = node_volumes(net);

    PoolGrid out = states;
    auto diffuse_all_substeps = [&] {
        for (long long k = 0; k < n_sub; ++k) {
            out.dom = diffusion_step_explicit(out.dom, net, water, params.d_c, dt_diff_days);
            police_dom(out.dom, volumes, cfg.p_neg);
        }
    };
    auto transform_once = [&] {
        out = police(transform_all(out, net, water, params, dt_tr_days), volumes, cfg.p_neg,
                     StepPhase::Transform);
    };

    if (cfg.order == StepOrder::DiffusionFirst) {
        diffuse_all_substeps();
        transform_once();
    } else {
        transform_once();
        diffuse_all_substeps();
    }
    return out;
}

PoolGrid run_with_backtracking(PoolGrid states, const PoreNetwork& net, const WaterMask& water,
                               const BioParams& params, const ExplicitConfig& cfg,
                               double t_end_days, RunStats* stats, const CommitHook& hook) {
    cfg.validate();
    params.validate();
    if (!(t_end_days > 0.0)) throw DomainError("t_end must be positive");

    const bool synchronous = cfg.coupling == Coupling::Synchronous;
    double dt_diff_s = cfg.dt_diffusion_s;
    double dt_tr_s = cfg.dt_transform_s;
    int halvings = 0;
    long long committed = 0;
    long long quiet = 0;
    double t = 0.0;

    while (t < t_end_days - kTimeEps) {
        const double macro_s = synchronous ? dt_diff_s : dt_tr_s;
        const double remaining_s = units::days_to_seconds(t_end_days - t);
        // Snap to a full step when the remainder differs only by rounding.
        const double step_s = remaining_s >= macro_s * (1.0 - 1e-9) ? macro_s : remaining_s;
        try {
            PoolGrid next;
            if (synchronous) {
                next = step_synchronous(states, net, water, params, cfg,
                                        units::seconds_to_days(step_s));
            } else {
                // A shortened final step keeps equal sub-steps no longer than
                // the current diffusion step.
                ExplicitConfig step_cfg = cfg;
                const auto n_sub = static_cast<long long>(std::ceil(step_s / dt_diff_s - 1e-9));
                step_cfg.dt_transform_s = step_s;
                step_cfg.dt_diffusion_s = step_s / static_cast<double>(std::max<long long>(1, n_sub));
                next = step_asynchronous(states, net, water, params, step_cfg);
            }
            states = std::move(next);
            t += units::seconds_to_days(step_s);
            ++committed;
            ++quiet;
            if (hook) hook(t, states);
        } catch (const BacktrackRequired& b) {
            if (++halvings > cfg.max_backtracks)
                throw StepCollapse("backtracking exceeded " + std::to_string(cfg.max_backtracks) +
                                   " halvings at t=" + std::to_string(t) + " d: " + b.what());
            if (synchronous || b.phase() == StepPhase::Diffusion) {
                dt_diff_s *= 0.5;
            } else {
                dt_tr_s *= 0.5;
                dt_diff_s *= 0.5;
            }
            quiet = 0;
            log::info("backtrack #" + std::to_string(halvings) + " at t=" + std::to_string(t) +
                      " d, dt_diffusion=" + std::to_string(dt_diff_s) + " s");
            continue;
        } catch (const RepairOverdraw& r) {
            if (++halvings > cfg.max_backtracks)
                throw StepCollapse("backtracking exceeded " + std::to_string(cfg.max_backtracks) +
                                   " halvings at t=" + std::to_string(t) + " d: " + r.what());
            dt_tr_s *= 0.5;
            dt_diff_s *= 0.5;
            quiet = 0;
            continue;
        }

        if (cfg.redouble_after_quiet && quiet >= cfg.redouble_quiet_steps) {
            bool changed = false;
            if (!synchronous && dt_tr_s * 2.0 <= cfg.dt_transform_s * (1.0 + 1e-12)) {
                dt_tr_s *= 2.0;
                dt_diff_s *= 2.0;
                changed = true;
            } else if (dt_diff_s * 2.0 <= cfg.dt_diffusion_s * (1.0 + 1e-12)) {
                const long long n = synchronous ? 1 : std::llround(dt_tr_s / dt_diff_s);
                if (synchronous || n % 2 == 0) {
                    dt_diff_s *= 2.0;
                    changed = true;
                }
            }
            if (changed) {
                quiet = 0;
                log::debug("redoubled time step to dt_diffusion=" + std::to_string(dt_diff_s) + " s");
            }
        }
    }

    if (stats != nullptr) {
        stats->macro_steps = committed;
        stats->backtracks = halvings;
        stats->dt_diffusion_s_final = dt_diff_s;
        stats->dt_transform_s_final = dt_tr_s;
    }
    return states;
}

} // namespace poresim
