#include "poresim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "poresim/implicit_diffusion.hpp"
#include "poresim/calibration.hpp"
#include "poresim/log.hpp"
#include "poresim/network_io.hpp"
#include "poresim/placement.hpp"
#include "poresim/units.hpp"

namespace poresim {

using nlohmann::json;

Scheme scheme_from_string(const std::string& name) {
    if (name == "explicit-sync") return Scheme::ExplicitSync;
    if (name == "explicit-async") return Scheme::ExplicitAsync;
    if (name == "implicit-async" || name == "implicit") return Scheme::ImplicitAsync;
    throw ConfigError("unknown scheme: " + name +
                      " (expected explicit-sync, explicit-async or implicit-async)");
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ExplicitSync: return "explicit-sync";
        case Scheme::ExplicitAsync: return "explicit-async";
        case Scheme::ImplicitAsync: return "implicit-async";
    }
    return "?";
}

void Scenario::validate() const {
    if (network_path.empty()) throw ConfigError("scenario needs a network path");
    if (!(saturation > 0.0) || saturation > 1.0)
        throw ConfigError("saturation must be in (0, 1]");
    if (!(t_end_hours > 0.0)) throw ConfigError("t_end must be positive");
    if (!(dt_diffusion_s > 0.0) || !(dt_transform_s > 0.0))
        throw ConfigError("time steps must be positive");
    if (dom_placement.total < 0.0 || mb_placement.total < 0.0)
        throw ConfigError("total masses must be nonnegative");
    if (mb_placement.mode == MbPlacement::Mode::Spots && mb_placement.count < 1)
        throw ConfigError("spot count must be at least 1");
    if (!(output.sample_interval_hours > 0.0))
        throw ConfigError("sample interval must be positive");
    bio.validate();
}

namespace {

void parse_bio(const json& j, BioParams& bio) {
    bio.rho = j.value("rho", bio.rho);
    bio.mu = j.value("mu", bio.mu);
    bio.rho_m = j.value("rho_m", bio.rho_m);
    bio.v_fom = j.value("v_fom", bio.v_fom);
    bio.v_som = j.value("v_som", bio.v_som);
    bio.v_dom = j.value("v_dom", bio.v_dom);
    bio.kappa_b = j.value("kappa_b", bio.kappa_b);
    bio.d_c = j.value("d_c", bio.d_c);
}

void parse_dom_placement(const json& j, DomPlacement& p) {
    const std::string mode = j.value("mode", std::string("uniform"));
    if (mode == "uniform") {
        p.mode = DomPlacement::Mode::Uniform;
    } else if (mode == "single-ball") {
        p.mode = DomPlacement::Mode::SingleBall;
        if (j.contains("ball") && j["ball"].is_number_integer())
            p.ball_id = j["ball"].get<int>();
        else
            p.ball_id = -1; // "random"
    } else if (mode == "plane-slab") {
        p.mode = DomPlacement::Mode::PlaneSlab;
        p.z_min = j.value("z_min", p.z_min);
        p.z_max = j.value("z_max", p.z_max);
    } else {
        throw ConfigError("unknown dom placement mode: " + mode);
    }
    p.total = j.value("total", p.total);
}

void parse_mb_placement(const json& j, MbPlacement& p) {
    const std::string mode = j.value("mode", std::string("spots"));
    if (mode == "spots") {
        p.mode = MbPlacement::Mode::Spots;
        p.count = j.value("count", p.count);
    } else if (mode == "list") {
        p.mode = MbPlacement::Mode::ExplicitList;
        if (!j.contains("masses") || !j["masses"].is_array())
            throw ConfigError("mb placement mode 'list' needs a 'masses' array of [id, mass]");
        for (const auto& entry : j["masses"])
            p.list.emplace_back(entry.at(0).get<int>(), entry.at(1).get<double>());
    } else {
        throw ConfigError("unknown mb placement mode: " + mode);
    }
    p.mass_per_bacterium = j.value("mass_per_bacterium", p.mass_per_bacterium);
    if (j.contains("n_bacteria")) p.n_bacteria = j["n_bacteria"].get<double>();
    p.total = j.value("total", p.total);
    if (p.n_bacteria) p.total = *p.n_bacteria * p.mass_per_bacterium;
}

} // namespace

Scenario scenario_from_json_text(const std::string& text, const std::string& path) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    Scenario s;
    try {
        if (j.contains("preset")) {
            const std::string preset = j["preset"].get<std::string>();
            if (preset != "arthrobacter-9r")
                throw ConfigError("unknown preset: " + preset);
            // The struct defaults are exactly this preset.
        }
        s.network_path = j.value("network", s.network_path);
        s.mass_unit = j.value("mass_unit", s.mass_unit);
        s.saturation = j.value("saturation", s.saturation);
        if (j.contains("scheme")) s.scheme = scheme_from_string(j["scheme"].get<std::string>());
        if (j.contains("order")) {
            const std::string order = j["order"].get<std::string>();
            if (order == "diffusion-first") s.order = StepOrder::DiffusionFirst;
            else if (order == "transform-first") s.order = StepOrder::TransformFirst;
            else throw ConfigError("unknown step order: " + order);
        }
        if (j.contains("bio")) parse_bio(j["bio"], s.bio);
        s.dt_diffusion_s = j.value("dt_diffusion_s", s.dt_diffusion_s);
        s.dt_transform_s = j.value("dt_transform_s", s.dt_transform_s);
        s.t_end_hours = j.value("t_end_hours", s.t_end_hours);
        s.p_neg = j.value("p_neg", s.p_neg);
        s.max_backtracks = j.value("max_backtracks", s.max_backtracks);
        s.pcg.tol = j.value("cg_tol", s.pcg.tol);
        s.pcg.max_iter = j.value("cg_max_iter", s.pcg.max_iter);
        if (j.contains("dom_placement")) parse_dom_placement(j["dom_placement"], s.dom_placement);
        if (j.contains("mb_placement")) parse_mb_placement(j["mb_placement"], s.mb_placement);
        if (j.contains("output")) {
            const json& o = j["output"];
            s.output.csv_path = o.value("csv", s.output.csv_path);
            s.output.sample_interval_hours =
                o.value("sample_interval_hours", s.output.sample_interval_hours);
            s.output.profile_path = o.value("profile", s.output.profile_path);
            s.output.profile_planes = o.value("profile_planes", s.output.profile_planes);
            s.output.profile_thickness = o.value("profile_thickness", s.output.profile_thickness);
        }
        s.seed = j.value("seed", s.seed);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return scenario_from_json_text(buffer.str(), path);
}

namespace {

std::string fmt_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

TrajectoryRecord make_record(double t_days, const PoolGrid& states, double initial_total) {
    TrajectoryRecord r;
    r.time_hours = units::days_to_hours(t_days);
    r.mass = states.totals();
    for (int s = 0; s < kPoolCount; ++s)
        r.percent[static_cast<size_t>(s)] =
            initial_total > 0.0 ? 100.0 * r.mass[static_cast<size_t>(s)] / initial_total : 0.0;
    return r;
}

} // namespace

void write_trajectory_header(std::ostream& out) {
    out << "time_h,mb,dom,som,fom,co2,mb_pct,dom_pct,som_pct,fom_pct,co2_pct\n";
}

void write_trajectory_record(std::ostream& out, const TrajectoryRecord& r) {
    out << fmt_sci(r.time_hours);
    for (double m : r.mass) out << ',' << fmt_sci(m);
    for (double p : r.percent) out << ',' << fmt_sci(p);
    out << '\n';
}

ScenarioResult run_scenario(const Scenario& scenario, const PoreNetwork* preloaded) {
    scenario.validate();

    PoreNetwork loaded;
    if (preloaded == nullptr) loaded = load_network(scenario.network_path);
    const PoreNetwork& net = preloaded != nullptr ? *preloaded : loaded;
    if (net.node_count() == 0) throw EmptyNetworkError("scenario network is empty");

    ScenarioResult result;
    result.drainage = drain_to_saturation(net, scenario.saturation);
    const WaterMask& water = result.drainage.water_mask;

    PoolGrid states(static_cast<size_t>(net.node_count()));
    switch (scenario.dom_placement.mode) {
        case DomPlacement::Mode::Uniform:
            states.dom = place_dom_uniform(net, water, scenario.dom_placement.total);
            break;
        case DomPlacement::Mode::SingleBall:
            states.dom = place_dom_single_ball(net, water, scenario.dom_placement.total,
                                               scenario.dom_placement.ball_id, scenario.seed);
            break;
        case DomPlacement::Mode::PlaneSlab:
            states.dom = place_dom_slab(net, water, scenario.dom_placement.total,
                                        scenario.dom_placement.z_min, scenario.dom_placement.z_max);
            break;
    }
    if (scenario.mb_placement.mode == MbPlacement::Mode::Spots) {
        states.mb = place_mb_spots(net, water, scenario.mb_placement.count,
                                   scenario.mb_placement.total, scenario.seed + 1);
    } else {
        for (const auto& [id, mass] : scenario.mb_placement.list) {
            if (id < 0 || id >= net.node_count())
                throw ConfigError("mb placement lists unknown node " + std::to_string(id));
            if (!water[static_cast<size_t>(id)])
                throw ConfigError("mb placement lists air-filled node " + std::to_string(id));
            states.mb[static_cast<size_t>(id)] += mass;
        }
    }

    result.initial_total_mass = states.total_mass();
    const double initial_total = result.initial_total_mass;
    const double t_end_days = units::hours_to_days(scenario.t_end_hours);
    const double sample_days = units::hours_to_days(scenario.output.sample_interval_hours);

    std::ofstream csv;
    const bool write_csv = !scenario.output.csv_path.empty();
    if (write_csv) {
        csv.open(scenario.output.csv_path);
        if (!csv) throw ConfigError("cannot open CSV output: " + scenario.output.csv_path);
        write_trajectory_header(csv);
    }

    auto emit = [&](double t_days, const PoolGrid& grid) {
        const TrajectoryRecord record = make_record(t_days, grid, initial_total);
        double total = 0.0;
        for (double m : record.mass) total += m;
        if (initial_total > 0.0 && std::abs(total - initial_total) > 1e-10 * initial_total)
            log::warn("trajectory record at t=" + std::to_string(record.time_hours) +
                      " h drifted " + std::to_string((total - initial_total) / initial_total) +
                      " relative");
        result.records.push_back(record);
        if (write_csv) {
            write_trajectory_record(csv, record);
            csv.flush();
        }
    };

    emit(0.0, states);
    double next_sample = sample_days;
    const CommitHook hook = [&](double t_days, const PoolGrid& grid) {
        if (t_days >= next_sample - 1e-12 || t_days >= t_end_days - 1e-12) {
            emit(t_days, grid);
            while (next_sample <= t_days + 1e-12) next_sample += sample_days;
        }
    };

    try {
        switch (scenario.scheme) {
            case Scheme::ExplicitSync:
            case Scheme::ExplicitAsync: {
                ExplicitConfig cfg;
                cfg.dt_diffusion_s = scenario.dt_diffusion_s;
                cfg.dt_transform_s = scenario.dt_transform_s;
                cfg.p_neg = scenario.p_neg;
                cfg.max_backtracks = scenario.max_backtracks;
                cfg.coupling = scenario.scheme == Scheme::ExplicitSync ? Coupling::Synchronous
                                                                       : Coupling::Asynchronous;
                cfg.order = scenario.order;
                result.final_states = run_with_backtracking(std::move(states), net, water,
                                                            scenario.bio, cfg, t_end_days,
                                                            &result.stats, hook);
                break;
            }
            case Scheme::ImplicitAsync: {
                ImplicitRunConfig cfg;
                cfg.dt_diffusion_s = scenario.dt_diffusion_s;
                cfg.dt_transform_s = scenario.dt_transform_s;
                cfg.p_neg = scenario.p_neg;
                cfg.max_backtracks = scenario.max_backtracks;
                cfg.pcg = scenario.pcg;
                result.final_states = run_implicit_async(std::move(states), net, water,
                                                         scenario.bio, cfg, t_end_days,
                                                         &result.stats, hook);
                break;
            }
        }
    } catch (const std::exception& e) {
        if (write_csv) {
            csv << "# ERROR: " << e.what() << "\n";
            csv.flush();
        }
        throw;
    }

    if (!scenario.output.profile_path.empty()) {
        const MassProfile profile =
            plane_profile(net, result.final_states.dom, scenario.output.profile_planes,
                          scenario.output.profile_thickness);
        save_profile(profile, scenario.output.profile_path);
    }
    return result;
}

} // namespace poresim
