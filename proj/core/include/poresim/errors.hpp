#pragma once

#include <stdexcept>
#include <string>

namespace poresim {

/// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Bad input: malformed files, invalid configuration, out-of-domain arguments.
/// CLI maps these to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ParseError : public ConfigError {
public:
    ParseError(const std::string& path, long line, const std::string& what)
        : ConfigError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class DomainError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class EmptyNetworkError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class NoWaterError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class TooManySpots : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ZeroProfile : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class DimensionMismatch : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Numeric failures during a run. CLI maps these to exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Which phase of a step tripped the negativity threshold; drives the
/// backtracking rule.
enum class StepPhase { Combined, Diffusion, Transform };

/// The negativity of some species exceeded p_neg * M after a step; the
/// step must be retried with a smaller time step.
class BacktrackRequired : public NumericError {
public:
    BacktrackRequired(int species, double negativity, double total, StepPhase phase)
        : NumericError("negativity threshold exceeded for species " + std::to_string(species) +
                       " (H=" + std::to_string(negativity) + ", M=" + std::to_string(total) + ")"),
          species_(species), negativity_(negativity), total_(total), phase_(phase) {}
    int species() const { return species_; }
    double negativity() const { return negativity_; }
    double total() const { return total_; }
    StepPhase phase() const { return phase_; }

private:
    int species_;
    double negativity_;
    double total_;
    StepPhase phase_;
};

/// Mass reallocation would drive a donor node negative.
class RepairOverdraw : public NumericError {
public:
    using NumericError::NumericError;
};

/// Backtracking exhausted max_backtracks halvings.
class StepCollapse : public NumericError {
public:
    using NumericError::NumericError;
};

class SolverDivergence : public NumericError {
public:
    using NumericError::NumericError;
};

class NonFiniteEncountered : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace poresim
