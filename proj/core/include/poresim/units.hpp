#pragma once

namespace poresim::units {

// The engine works in days (rate constants are per day, diffusion
// coefficients in voxel^2/day). User-facing time steps are in seconds and
// durations in hours; convert once at the boundary.

inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kHoursPerDay = 24.0;

inline constexpr double seconds_to_days(double s) { return s / kSecondsPerDay; }
inline constexpr double days_to_seconds(double d) { return d * kSecondsPerDay; }
inline constexpr double hours_to_days(double h) { return h / kHoursPerDay; }
inline constexpr double days_to_hours(double d) { return d * kHoursPerDay; }

} // namespace poresim::units
