#include "poresim/calibration.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "poresim/errors.hpp"
#include "poresim/implicit_diffusion.hpp"
#include "poresim/placement.hpp"
#include "poresim/units.hpp"

namespace poresim {

MassProfile plane_profile(const PoreNetwork& net, const std::vector<double>& dom, int planes,
                          double plane_thickness) {
    if (planes < 1) throw DomainError("profile needs at least one plane");
    if (!(plane_thickness > 0.0)) throw DomainError("plane thickness must be positive");
    if (dom.size() != static_cast<size_t>(net.node_count()))
        throw DimensionMismatch("dom vector does not match node count");

    MassProfile profile;
    profile.plane_thickness = plane_thickness;
    profile.values.assign(static_cast<size_t>(planes), 0.0);
    for (int i = 0; i < net.node_count(); ++i) {
        const double k = std::floor(net.node(i).center.z / plane_thickness);
        if (k >= 0.0 && k < static_cast<double>(planes))
            profile.values[static_cast<size_t>(k)] += dom[static_cast<size_t>(i)];
        else
            profile.dropped_mass += dom[static_cast<size_t>(i)];
    }
    return profile;
}

double cosine_similarity(const MassProfile& a, const MassProfile& b) {
    if (a.values.size() != b.values.size())
        throw DimensionMismatch("profiles have different lengths (" +
                                std::to_string(a.values.size()) + " vs " +
                                std::to_string(b.values.size()) + ")");
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        ab += a.values[i] * b.values[i];
        aa += a.values[i] * a.values[i];
        bb += b.values[i] * b.values[i];
    }
    if (aa == 0.0 || bb == 0.0) throw ZeroProfile("cosine of an all-zero profile is undefined");
    return ab / std::sqrt(aa * bb);
}

MassProfile load_profile(const std::string& path, double plane_thickness) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open profile file: " + path);
    MassProfile profile;
    profile.plane_thickness = plane_thickness;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        double v;
        if (!(ls >> v)) {
            std::string tag;
            std::istringstream probe(line);
            if (!(probe >> tag) || tag[0] == '#') continue;
            throw ParseError(path, line_no, "expected one mass value per line");
        }
        profile.values.push_back(v);
    }
    if (profile.values.empty()) throw ConfigError("profile file is empty: " + path);
    return profile;
}

void save_profile(const MassProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    char buf[40];
    for (double v : profile.values) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        out << buf;
    }
}

void CalibrationConfig::validate() const {
    if (!(alpha_min > 0.5) || !(alpha_max <= 1.0 + 1e-12) || !(alpha_min <= alpha_max))
        throw ConfigError("alpha grid must lie within (0.5, 1]");
    if (!(alpha_step > 0.0)) throw ConfigError("alpha step must be positive");
    if (planes < 1) throw ConfigError("profile needs at least one plane");
    if (!(t_end_hours >= 0.0)) throw ConfigError("calibration duration must be nonnegative");
    if (!(dt_diffusion_s > 0.0)) throw ConfigError("dt_diffusion must be positive");
    if (!(d_c >= 0.0)) throw ConfigError("diffusion coefficient must be nonnegative");
}

std::vector<double> CalibrationConfig::alpha_grid() const {
    std::vector<double> grid;
    for (int k = 0;; ++k) {
        const double alpha = alpha_min + static_cast<double>(k) * alpha_step;
        if (alpha > alpha_max + 1e-9) break;
        grid.push_back(std::min(alpha, 1.0));
    }
    return grid;
}

MassProfile diffusion_profile(const PoreNetwork& net, double alpha, const CalibrationConfig& cfg) {
    const PoreNetwork candidate = net.with_contact_areas(alpha);
    const WaterMask water(static_cast<size_t>(candidate.node_count()), 1);
    std::vector<double> dom =
        place_dom_slab(candidate, water, cfg.total_mass, cfg.slab_z_min, cfg.slab_z_max);

    if (cfg.t_end_hours > 0.0) {
        const double t_end_days = units::hours_to_days(cfg.t_end_hours);
        const double dt_days = units::seconds_to_days(cfg.dt_diffusion_s);
        const auto steps = static_cast<long long>(std::ceil(t_end_days / dt_days - 1e-9));
        ImplicitWorkspace workspace(candidate, water);
        // Equal steps covering t_end exactly.
        workspace.prepare(cfg.d_c, t_end_days / static_cast<double>(steps));
        for (long long k = 0; k < steps; ++k) dom = workspace.step(dom, cfg.pcg);
    }
    return plane_profile(candidate, dom, cfg.planes, cfg.plane_thickness);
}

FitResult fit_alpha(const PoreNetwork& net, const MassProfile& reference,
                    const CalibrationConfig& cfg) {
    cfg.validate();
    if (reference.planes() != cfg.planes)
        throw ConfigError("reference profile has " + std::to_string(reference.planes()) +
                          " planes, config expects " + std::to_string(cfg.planes));

    FitResult result;
    for (double alpha : cfg.alpha_grid()) {
        const MassProfile profile = diffusion_profile(net, alpha, cfg);
        const double cosine = cosine_similarity(reference, profile);
        result.evaluated.emplace_back(alpha, cosine);
        // >= breaks ties toward the larger (more physical) alpha.
        if (result.evaluated.size() == 1 || cosine >= result.cosine) {
            result.alpha = alpha;
            result.cosine = cosine;
        }
    }
    return result;
}

} // namespace poresim
