#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "memsim/control.hpp"
#include "memsim/params.hpp"

namespace memsim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// [physics] section; frequencies are given as nu/2pi in MHz and converted to
// angular rad/s internally.  g is specified indirectly via the cooperativity.
struct PhysicsConfig {
    double cooperativity = 200.0;
    double gamma_perp_mhz = 3.0;
    double kappa_mhz = 2.0;
    double delta_mhz = 200.0;
    double omega_sg_mhz = 10.0;
    double atom_number = 1.0;
};

struct ControlConfig {
    double floor_eps = 1e-3;
    double omega_cap_factor = 10.0;
};

struct SweepConfig {
    std::vector<double> durations{4.0, 8.0, 12.0, 16.0, 20.0};  // values of 2 kappa T
    int grid_n = 4096;
};

struct OutputConfig {
    std::string directory = "out";
    bool emit_profiles = true;
    bool emit_oracle = false;
    bool emit_green = false;
};

struct RunConfig {
    PhysicsConfig physics;
    ControlConfig control;
    SweepConfig sweep;
    OutputConfig output;

    PhysicalParams params() const;
    ControlOptions control_options() const {
        return {control.floor_eps, control.omega_cap_factor};
    }

    void validate() const;  // throws ConfigError
};

// Plain-text sections [physics], [control], [sweep], [output] with key=value
// lines; '#' starts a comment.  Unknown sections or keys are errors.
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config_file(const std::string& path);

std::vector<double> parse_duration_list(std::string_view csv);

}  // namespace memsim
