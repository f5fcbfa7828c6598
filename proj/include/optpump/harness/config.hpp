#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optpump/core.hpp"
#include "optpump/errors.hpp"
#include "optpump/spectrum.hpp"

namespace optpump::harness {

enum class Mode { Populations, SpectrumAnalytic, SpectrumQrt, SpectrumTrajectory, SpectrumTransient, Compare, Sweep };

std::string_view mode_name(Mode mode);
std::optional<Mode> parse_mode(std::string_view name);

// Invalid configuration; the message starts with the offending key path.
class ConfigError : public DomainError {
public:
    ConfigError(std::string key, const std::string& what) : DomainError(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

struct DriveConfig {
    enum class Kind { Constant, ExpRamp };
    Kind kind = Kind::Constant;
    double rise_time = 1.0;
    double t_start = 0.0;
};

struct NumericsConfig {
    double dt = 0.001;
    double t_end = 40.0;
    double tau = 40.0;
    std::size_t n_half = 0;  // 0: cover [-2 W, 2 W] with W the doublet splitting
    double tau_max = 0.0;    // 0: default_correlation_span
    std::vector<double> gamma_t_sequence{0.1, 0.01, 1e-3, 1e-4, 1e-5};
};

struct OutputConfig {
    std::string dir = ".";
    bool plot = false;
};

struct SweepConfig {
    std::string param; // rabi | gamma_e | gamma_t | delta | rise_time
    std::vector<double> values;
    Mode target = Mode::SpectrumTransient;
};

struct ScenarioConfig {
    Mode mode = Mode::Populations;
    AtomParams atom;
    DriveConfig drive;
    NumericsConfig numerics;
    OutputConfig output;
    SweepConfig sweep;

    // Drive with peak atom.rabi.
    DriveProfile drive_profile() const;
    FrequencyGrid grid() const;
    // The configuration of one sweep point, with the swept parameter set and
    // mode replaced by the sweep target.
    ScenarioConfig sweep_point(double value) const;
};

// Ordered (key path, value) pairs, e.g. {"atom.rabi", "3"}; applied after the
// file so that they take precedence.
using Overrides = std::vector<std::pair<std::string, std::string>>;

// Parses a sectioned key = value document, applies overrides and validates
// the result against the preconditions of the selected mode. Throws
// ConfigError.
ScenarioConfig parse_config(std::string_view file_contents, const Overrides& overrides = {});

void validate(const ScenarioConfig& cfg);

// One line per key with its default, for --help.
std::string describe_keys();

} // namespace optpump::harness
