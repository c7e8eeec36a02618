// config.hpp - run configuration, presets and the flat key = value format
//
// Keys (one per line, '#' starts a comment):
//   preset        name of a preset to start from (other keys override it)
//   n_qubits      integer in [1, 8]
//   beta          inverse temperature 1/T (energy^-1), or `sine(T0, A)` for
//                 the schedule T(t) = T0 + A sin(pi t / tau)
//   gamma         damping rate (>= 0, energy units)
//   eps0, eps_tau initial / final level splitting (> 0, energy units)
//   tau           protocol duration (> 0, time units, hbar = 1)
//   lambda0       coupling amplitude (energy units)
//   interaction   xx | zz | none
//   dt            RK4 step (> 0; tau / dt must be an integer)
//   record_every  steps between recorded samples (>= 1)
//   output_path   CSV destination

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qduality/dynamics.hpp"
#include "qduality/model.hpp"

namespace qduality {

/// Bad configuration: unknown key, type mismatch or range violation.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& reason);
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct TemperatureSpec {
    enum class Kind { Constant, Sine };
    Kind kind = Kind::Constant;
    double beta = 1.0;       // Constant
    double base = 1.0;       // Sine: T0
    double amplitude = 0.0;  // Sine: A

    TemperatureSchedule schedule(double tau) const;
    double initial_beta() const { return kind == Kind::Constant ? beta : 1.0 / base; }
    std::string to_string() const;
};

/// Sign expectations attached to a preset, checked by `verify`.
struct PresetExpectations {
    int cost_contrast_sign = 0;      // +1, -1, or 0 for no expectation
    bool correlation_growth = false;
    bool monotone_heat = false;
    bool contrast_terms = false;     // F_delta, W_delta > 0 and W_delta <= 0.1 F_delta
};

struct RunConfig {
    int n_qubits = 2;
    TemperatureSpec temperature;
    double gamma = 0.02;
    double eps0 = 0.4;
    double eps_tau = 10.0;
    double tau = 10.0;
    double lambda0 = 0.02;
    InteractionKind interaction = InteractionKind::XX;
    double dt = 1e-4;
    int record_every = 1;
    std::string output_path;
    std::optional<std::string> preset;

    OpenSystemModel model() const;
    IntegratorConfig integrator() const;
    /// Throws ConfigError naming the first offending key.
    void validate() const;
    /// Flat key = value text that parses back to this configuration.
    std::string to_text() const;
};

const std::vector<std::string>& preset_names();
/// Throws ConfigError (key "preset") for unknown names.
RunConfig preset(const std::string& name);
PresetExpectations preset_expectations(const std::string& name);

RunConfig parse_config(std::string_view text);
/// Keys in `text` override `base`; a `preset` key replaces `base` first.
RunConfig parse_config(std::string_view text, const RunConfig& base);
RunConfig load_config(const std::string& path);
RunConfig load_config(const std::string& path, const RunConfig& base);

}  // namespace qduality
