#pragma once

#include <string>
#include <vector>

#include "poresim/network.hpp"
#include "poresim/sparse.hpp"

namespace poresim {

/// Per-plane DOM mass curve: values[k] is the total mass whose ball centers
/// fall in plane slab k (plane index = floor(z / plane_thickness)). Mass
/// outside [0, planes) is excluded from the curve and reported in
/// dropped_mass.
struct MassProfile {
    std::vector<double> values;
    double plane_thickness = 1.0;
    double dropped_mass = 0.0;

    int planes() const { return static_cast<int>(values.size()); }
};

MassProfile plane_profile(const PoreNetwork& net, const std::vector<double>& dom, int planes,
                          double plane_thickness = 1.0);

/// Normalized inner product of two equal-length profiles, in [0, 1] for
/// nonnegative curves; exactly 1 for identical curves. Throws ZeroProfile when
/// either curve is all zero.
double cosine_similarity(const MassProfile& a, const MassProfile& b);

/// Text profile files: one mass value per line, line index = plane index.
MassProfile load_profile(const std::string& path, double plane_thickness = 1.0);
void save_profile(const MassProfile& profile, const std::string& path);

struct CalibrationConfig {
    double d_c = 100000.0;       // voxel^2/day during the calibration runs
    double t_end_hours = 1.783;
    double dt_diffusion_s = 10.0; // implicit pure-diffusion step
    int planes = 300;
    double plane_thickness = 1.0;
    double alpha_min = 0.55;
    double alpha_max = 1.0;
    double alpha_step = 0.05;
    double slab_z_min = 0.0; // initial mass goes to balls intersecting this slab,
    double slab_z_max = 2.0; // proportionally to their volumes
    double total_mass = 592.7593;
    PcgOptions pcg;

    void validate() const;
    std::vector<double> alpha_grid() const;
};

struct FitResult {
    double alpha = 0.0;
    double cosine = 0.0;
    /// (alpha, cosine) per grid candidate, ascending alpha.
    std::vector<std::pair<double, double>> evaluated;
};

/// Grid search for the contact-area factor: for each candidate alpha the
/// contact areas are recomputed, a pure implicit diffusion run evolves the
/// slab placement for t_end_hours, and the plane profile is scored against
/// the reference by cosine similarity. Ties break toward the larger alpha.
FitResult fit_alpha(const PoreNetwork& net, const MassProfile& reference,
                    const CalibrationConfig& cfg);

/// The pure-diffusion profile for one alpha (the inner run of fit_alpha);
/// also used to produce reference profiles.
MassProfile diffusion_profile(const PoreNetwork& net, double alpha, const CalibrationConfig& cfg);

} // namespace poresim
