/// poresim CLI: pore-network transformation-diffusion simulations.
///
/// Exit codes: 0 success, 2 configuration/input error, 3 numeric failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "poresim/calibration.hpp"
#include "poresim/drainage.hpp"
#include "poresim/errors.hpp"
#include "poresim/log.hpp"
#include "poresim/network_io.hpp"
#include "poresim/scenario.hpp"
#include "poresim/synthetic.hpp"

namespace {

using namespace poresim;

int cmd_simulate(const std::string& config_path, const std::string& network,
                 const std::string& scheme, const std::string& coupling, double dt_diff,
                 double dt_bio, double p_neg, double t_end_hours, double saturation, double cg_tol,
                 int cg_max_iter, const std::string& out_csv, std::int64_t seed) {
    Scenario scenario;
    if (!config_path.empty()) scenario = load_scenario(config_path);
    if (!network.empty()) scenario.network_path = network;
    if (!scheme.empty()) {
        if (scheme == "explicit") {
            scenario.scheme = coupling == "sync" ? Scheme::ExplicitSync : Scheme::ExplicitAsync;
        } else if (scheme == "implicit") {
            scenario.scheme = Scheme::ImplicitAsync;
        } else {
            scenario.scheme = scheme_from_string(scheme);
        }
    }
    if (dt_diff > 0) scenario.dt_diffusion_s = dt_diff;
    if (dt_bio > 0) scenario.dt_transform_s = dt_bio;
    if (p_neg > 0) scenario.p_neg = p_neg;
    if (t_end_hours > 0) scenario.t_end_hours = t_end_hours;
    if (saturation > 0) scenario.saturation = saturation;
    if (cg_tol > 0) scenario.pcg.tol = cg_tol;
    if (cg_max_iter > 0) scenario.pcg.max_iter = cg_max_iter;
    if (!out_csv.empty()) scenario.output.csv_path = out_csv;
    if (seed >= 0) scenario.seed = static_cast<std::uint64_t>(seed);

    const ScenarioResult result = run_scenario(scenario);
    std::cout << "scheme " << scheme_name(scenario.scheme) << ", " << result.records.size()
              << " records, " << result.stats.macro_steps << " steps, "
              << result.stats.backtracks << " backtracks";
    if (scenario.scheme == Scheme::ImplicitAsync)
        std::cout << ", max CG iterations " << result.stats.max_cg_iterations;
    std::cout << "\n";
    const TrajectoryRecord& last = result.records.back();
    std::cout << "t=" << last.time_hours << " h:";
    for (int s = 0; s < kPoolCount; ++s)
        std::cout << ' ' << pool_name(static_cast<Pool>(s)) << '='
                  << last.mass[static_cast<size_t>(s)];
    std::cout << "\n";
    return 0;
}

int cmd_drain(const std::string& network, double saturation, const std::string& out_path) {
    const PoreNetwork net = load_network(network);
    const DrainageResult result = drain_to_saturation(net, saturation);
    std::cout << "threshold radius " << result.threshold << "\n";
    std::cout << "achieved saturation " << result.achieved_saturation << " (" << result.water_count()
              << " of " << net.node_count() << " balls water-filled)\n";

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw ConfigError("cannot open output file: " + out_path);
        out = &file;
    }
    for (int i = 0; i < net.node_count(); ++i)
        if (result.water_mask[static_cast<size_t>(i)]) *out << net.node(i).external_id << "\n";
    return 0;
}

int cmd_calibrate(const std::string& network, const std::string& reference, CalibrationConfig cfg,
                  double saturation) {
    PoreNetwork net = load_network(network);
    if (saturation < 1.0) {
        // Calibrate on the water-filled subnetwork.
        const DrainageResult drained = drain_to_saturation(net, saturation);
        std::vector<BallNode> kept;
        std::vector<int> remap(static_cast<size_t>(net.node_count()), -1);
        for (int i = 0; i < net.node_count(); ++i) {
            if (!drained.water_mask[static_cast<size_t>(i)]) continue;
            BallNode b = net.node(i);
            remap[static_cast<size_t>(i)] = b.id = static_cast<int>(kept.size());
            kept.push_back(b);
        }
        std::vector<AdjacencyArc> arcs;
        for (const AdjacencyArc& a : net.arcs()) {
            const int i = remap[static_cast<size_t>(a.i)];
            const int j = remap[static_cast<size_t>(a.j)];
            if (i >= 0 && j >= 0) arcs.push_back({i, j, a.distance, a.contact_area});
        }
        net = PoreNetwork(std::move(kept), std::move(arcs));
    }
    const MassProfile ref = load_profile(reference, cfg.plane_thickness);
    cfg.planes = ref.planes();
    const FitResult fit = fit_alpha(net, ref, cfg);
    for (const auto& [alpha, cosine] : fit.evaluated)
        std::cout << "alpha " << alpha << " cosine " << cosine << "\n";
    std::cout << "best alpha " << fit.alpha << " (cosine " << fit.cosine << ")\n";
    return 0;
}

int cmd_profile(const std::string& network, double alpha, const CalibrationConfig& cfg,
                const std::string& out_path) {
    const PoreNetwork net = load_network(network);
    const MassProfile profile = diffusion_profile(net, alpha, cfg);
    save_profile(profile, out_path);
    std::cout << "wrote " << profile.planes() << "-plane profile to " << out_path;
    if (profile.dropped_mass > 0.0)
        std::cout << " (dropped mass beyond last plane: " << profile.dropped_mass << ")";
    std::cout << "\n";
    return 0;
}

int cmd_gen_net(const std::string& kind, int size, std::uint64_t seed, const std::string& out_path) {
    const PoreNetwork net = generate_synthetic_network(synthetic_kind_from_string(kind), size, seed);
    save_network(net, out_path);
    std::cout << "wrote " << net.node_count() << " balls, " << net.arc_count() << " arcs to "
              << out_path << "\n";
    return 0;
}

int cmd_validate(const std::string& network) {
    const PoreNetwork net = load_network(network);
    const WaterMask all(static_cast<size_t>(net.node_count()), 1);
    const auto components = connected_components(net, all);
    size_t largest = 0;
    for (const auto& c : components) largest = std::max(largest, c.size());

    double r_min = net.node_count() > 0 ? net.node(0).radius : 0.0;
    double r_max = r_min;
    for (const BallNode& b : net.nodes()) {
        r_min = std::min(r_min, b.radius);
        r_max = std::max(r_max, b.radius);
    }

    std::cout << "balls " << net.node_count() << ", arcs " << net.arc_count() << "\n";
    std::cout << "radius range [" << r_min << ", " << r_max << "], total volume "
              << net.total_volume() << "\n";
    std::cout << "connected components " << components.size() << " (largest " << largest << ")\n";
    std::cout << "all invariants hold\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pore-network transformation-diffusion simulator"};
    app.require_subcommand(1);

    std::string verbosity;
    app.add_option("--log", verbosity, "log level: debug|info|warn|error");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a scenario");
    std::string sim_config, sim_network, sim_scheme, sim_coupling = "async", sim_out;
    double sim_dt_diff = 0, sim_dt_bio = 0, sim_p_neg = 0, sim_hours = 0, sim_sat = 0, sim_cg_tol = 0;
    int sim_cg_max_iter = 0;
    std::int64_t sim_seed = -1;
    simulate->add_option("--config", sim_config, "scenario JSON file");
    simulate->add_option("--network", sim_network, "network file (overrides config)");
    simulate->add_option("--scheme", sim_scheme, "explicit|implicit|explicit-sync|explicit-async|implicit-async");
    simulate->add_option("--coupling", sim_coupling, "sync|async (with --scheme explicit)")
        ->check(CLI::IsMember({"sync", "async"}));
    simulate->add_option("--dt-diff", sim_dt_diff, "diffusion time step, seconds");
    simulate->add_option("--dt-bio", sim_dt_bio, "transformation time step, seconds");
    simulate->add_option("--p-neg", sim_p_neg, "maximum negativity fraction");
    simulate->add_option("--hours", sim_hours, "simulated duration, hours");
    simulate->add_option("--saturation", sim_sat, "water saturation target in (0,1]");
    simulate->add_option("--cg-tol", sim_cg_tol, "CG relative residual tolerance");
    simulate->add_option("--cg-max-iter", sim_cg_max_iter, "CG iteration cap");
    simulate->add_option("--out", sim_out, "trajectory CSV path");
    simulate->add_option("--seed", sim_seed, "RNG seed");

    // drain
    auto* drain = app.add_subcommand("drain", "radius-threshold drainage");
    std::string drain_network, drain_out;
    double drain_sat = 1.0;
    drain->add_option("--network", drain_network, "network file")->required();
    drain->add_option("--saturation", drain_sat, "target saturation in (0,1]")->required();
    drain->add_option("--out", drain_out, "write water node ids here instead of stdout");

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "fit the contact-area factor alpha");
    std::string cal_network, cal_reference;
    CalibrationConfig cal_cfg;
    double cal_sat = 1.0;
    calibrate->add_option("--network", cal_network, "network file")->required();
    calibrate->add_option("--reference", cal_reference, "reference profile file")->required();
    calibrate->add_option("--alpha-min", cal_cfg.alpha_min, "grid start (> 0.5)");
    calibrate->add_option("--alpha-max", cal_cfg.alpha_max, "grid end (<= 1)");
    calibrate->add_option("--alpha-step", cal_cfg.alpha_step, "grid step");
    calibrate->add_option("--dc", cal_cfg.d_c, "diffusion coefficient, voxel^2/day");
    calibrate->add_option("--hours", cal_cfg.t_end_hours, "diffusion duration, hours");
    calibrate->add_option("--dt-diff", cal_cfg.dt_diffusion_s, "implicit step, seconds");
    calibrate->add_option("--total-mass", cal_cfg.total_mass, "initial slab mass");
    calibrate->add_option("--saturation", cal_sat, "drain to this saturation first");

    // profile
    auto* profile = app.add_subcommand("profile", "pure-diffusion plane profile");
    std::string prof_network, prof_out;
    CalibrationConfig prof_cfg;
    double prof_alpha = kDefaultContactAlpha;
    profile->add_option("--network", prof_network, "network file")->required();
    profile->add_option("--out", prof_out, "output profile file")->required();
    profile->add_option("--alpha", prof_alpha, "contact-area factor");
    profile->add_option("--dc", prof_cfg.d_c, "diffusion coefficient, voxel^2/day");
    profile->add_option("--hours", prof_cfg.t_end_hours, "diffusion duration, hours (0: initial placement)");
    profile->add_option("--dt-diff", prof_cfg.dt_diffusion_s, "implicit step, seconds");
    profile->add_option("--planes", prof_cfg.planes, "plane count");
    profile->add_option("--thickness", prof_cfg.plane_thickness, "plane thickness, voxels");
    profile->add_option("--total-mass", prof_cfg.total_mass, "initial slab mass");
    profile->add_option("--z-min", prof_cfg.slab_z_min, "slab lower bound");
    profile->add_option("--z-max", prof_cfg.slab_z_max, "slab upper bound");

    // gen-net
    auto* gen_net = app.add_subcommand("gen-net", "generate a synthetic network");
    std::string gen_kind = "grid3d", gen_out;
    int gen_size = 10;
    std::uint64_t gen_seed = 0;
    gen_net->add_option("--kind", gen_kind, "chain|grid3d|random_tangent");
    gen_net->add_option("--size", gen_size, "node count (chain, random_tangent) or edge length (grid3d)");
    gen_net->add_option("--seed", gen_seed, "RNG seed");
    gen_net->add_option("--out", gen_out, "output network file")->required();

    // validate
    auto* validate = app.add_subcommand("validate", "check network file invariants");
    std::string val_network;
    validate->add_option("--network", val_network, "network file")->required();

    CLI11_PARSE(app, argc, argv);

    if (!verbosity.empty()) {
        if (verbosity == "debug") poresim::log::set_threshold(poresim::log::Level::Debug);
        else if (verbosity == "info") poresim::log::set_threshold(poresim::log::Level::Info);
        else if (verbosity == "warn") poresim::log::set_threshold(poresim::log::Level::Warn);
        else if (verbosity == "error") poresim::log::set_threshold(poresim::log::Level::Error);
    }

    try {
        if (simulate->parsed())
            return cmd_simulate(sim_config, sim_network, sim_scheme, sim_coupling, sim_dt_diff,
                                sim_dt_bio, sim_p_neg, sim_hours, sim_sat, sim_cg_tol,
                                sim_cg_max_iter, sim_out, sim_seed);
        if (drain->parsed()) return cmd_drain(drain_network, drain_sat, drain_out);
        if (calibrate->parsed()) return cmd_calibrate(cal_network, cal_reference, cal_cfg, cal_sat);
        if (profile->parsed()) return cmd_profile(prof_network, prof_alpha, prof_cfg, prof_out);
        if (gen_net->parsed()) return cmd_gen_net(gen_kind, gen_size, gen_seed, gen_out);
        if (validate->parsed()) return cmd_validate(val_network);
    } catch (const poresim::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const poresim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
