#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memsim/config.hpp"
#include "memsim/noise.hpp"

namespace memsim {

// Per-duration acceptance gates applied by the sweep driver.
inline constexpr double kMatchingTolerance = 0.02;
inline constexpr double kSumRuleConstant = 2.0;  // sum-rule residual bound, c * D

struct OracleComparison {
    double deviation = 0.0;  // max_t ||E_oracle| - |E_twoband|| / max_t |E_twoband|
    double bound = 0.0;      // 3 max(kappa_eff, max_t g sqrt(N) |Omega| / |Delta|) / (2 omega_sg)
    std::vector<double> abs_field_twoband;
    std::vector<double> abs_field_oracle;
};

struct DurationResult {
    double t_total = 0.0;  // dimensionless duration 2 kappa T
    bool completed = false;
    std::string error;  // exception text when the run failed outright

    SignalMode mode;
    ControlSolution control;
    NoiseBudget budget;
    RegimeReport regime;
    double liouville_residual = 0.0;

    bool regime_pass = false;
    bool matching_pass = false;
    bool sum_rule_pass = false;
    bool ok() const { return completed && regime_pass && matching_pass && sum_rule_pass; }

    std::optional<OracleComparison> oracle;
    double seconds = 0.0;  // wall clock, reported on stdout only
};

// Runs the whole pipeline for one duration.  Pure apart from timing.
DurationResult run_one_duration(const RunConfig& cfg, double t_total, bool with_oracle);

struct ValidationResult {
    double t_total = 0.0;
    bool completed = false;
    std::string error;
    RegimeReport regime;
    double omega_max = 0.0;
};

// Regime checks only: synthesizes the control, evaluates the depletion
// metric and the regime conditions.  No propagator or noise budget.
ValidationResult validate_one_duration(const RunConfig& cfg, double t_total);

struct SweepOutcome {
    std::vector<DurationResult> rows;
    bool all_ok = false;
};

// Parallel map over the sweep durations; rows come back in sweep order
// regardless of scheduling.
SweepOutcome run_sweep(const RunConfig& cfg, int jobs);

// Writes fig3.csv, optional per-duration profile/envelope/green/oracle CSVs,
// report.json and summary.txt into cfg.output.directory.  All files are
// byte-deterministic for a fixed config.
void write_outputs(const RunConfig& cfg, const SweepOutcome& outcome);

struct ScalingRow {
    double factor = 0.0;
    double g_dminus_ratio = 0.0;
    double g_sminus_ratio = 0.0;
    double covariance_ratio = 0.0;
};

struct ScalingTable {
    double t_total = 0.0;
    double base_g_dminus_sq = 0.0;
    double base_g_sminus_sq = 0.0;
    double base_covariance_abs = 0.0;
    std::vector<ScalingRow> rows;
};

// Recomputes the luminescence-channel powers with omega_sg scaled by each
// factor; the control synthesis does not depend on omega_sg, so the ratios
// must equal factor^-2 exactly.
ScalingTable run_scaling_check(const RunConfig& cfg, const std::vector<double>& factors,
                               double t_total);

std::string format_summary(const RunConfig& cfg, const SweepOutcome& outcome);
std::string format_scaling_table(const ScalingTable& table);

}  // namespace memsim
