#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "poresim/biology.hpp"
#include "poresim/drainage.hpp"
#include "poresim/explicit_diffusion.hpp"
#include "poresim/network.hpp"
#include "poresim/sparse.hpp"

namespace poresim {

enum class Scheme { ExplicitSync, ExplicitAsync, ImplicitAsync };

Scheme scheme_from_string(const std::string& name);
const char* scheme_name(Scheme s);

struct DomPlacement {
    enum class Mode { Uniform, SingleBall, PlaneSlab };
    Mode mode = Mode::Uniform;
    double total = 0.2895;
    int ball_id = -1; // SingleBall: -1 picks a random water ball
    double z_min = 0.0, z_max = 2.0; // PlaneSlab
};

struct MbPlacement {
    enum class Mode { Spots, ExplicitList };
    Mode mode = Mode::Spots;
    int count = 1000;
    /// Total mass, in the scenario's mass unit. When n_bacteria is set the
    /// total becomes n_bacteria * mass_per_bacterium instead.
    double total = 1.04e-4;
    std::optional<double> n_bacteria;
    double mass_per_bacterium = 2e-12; // grams per cell; express in the scenario unit
    std::vector<std::pair<int, double>> list; // ExplicitList: (node id, mass)
};

struct OutputConfig {
    std::string csv_path;          // empty: records kept in memory only
    double sample_interval_hours = 1.0;
    std::string profile_path;      // empty: no final DOM profile
    int profile_planes = 300;
    double profile_thickness = 1.0;
};

struct Scenario {
    std::string network_path;
    std::string mass_unit = "mg"; // label only; the engine is unit-agnostic
    double saturation = 1.0;
    Scheme scheme = Scheme::ImplicitAsync;
    BioParams bio;
    double dt_diffusion_s = 10.0;
    double dt_transform_s = 10.0;
    double t_end_hours = 120.0;
    double p_neg = 0.01;
    int max_backtracks = 40;
    StepOrder order = StepOrder::DiffusionFirst;
    PcgOptions pcg;
    DomPlacement dom_placement;
    MbPlacement mb_placement;
    OutputConfig output;
    std::uint64_t seed = 42;

    void validate() const;
};

/// Reads a scenario from JSON. A "preset" field seeds the defaults
/// ("arthrobacter-9r" is currently the only preset and matches the struct
/// defaults above); explicit fields override the preset.
Scenario scenario_from_json_text(const std::string& text, const std::string& path_for_errors);
Scenario load_scenario(const std::string& path);

/// Global pool totals at one sample time, as mass and as percent of the
/// total initial carbon mass.
struct TrajectoryRecord {
    double time_hours = 0.0;
    std::array<double, kPoolCount> mass{};
    std::array<double, kPoolCount> percent{};
};

struct ScenarioResult {
    std::vector<TrajectoryRecord> records;
    PoolGrid final_states;
    DrainageResult drainage;
    RunStats stats;
    double initial_total_mass = 0.0;
};

/// One trajectory row: 17-significant-digit scientific notation, '.' decimal
/// separator, so equal runs produce byte-identical files.
void write_trajectory_header(std::ostream& out);
void write_trajectory_record(std::ostream& out, const TrajectoryRecord& record);

/// Drains, places the initial masses, advances the selected scheme to
/// t_end and samples records at the configured interval (plus t = 0 and
/// t_end). Deterministic for a fixed seed. When a CSV path is configured the
/// rows are flushed as they are produced; on failure an error marker line is
/// appended before the exception propagates.
ScenarioResult run_scenario(const Scenario& scenario, const PoreNetwork* preloaded = nullptr);

} // namespace poresim
