#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memsim/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kRunFailure = 1, kUsageError = 2 };

memsim::RunConfig load_config(const std::string& path) {
    if (path.empty()) return memsim::RunConfig{};  // built-in defaults
    return memsim::parse_config_file(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memsim: cavity Raman memory readout simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::string durations_csv;
    std::string factors_csv = "0.5,2,4";
    double scaling_t_total = 12.0;
    int jobs = 1;

    CLI::App* run = app.add_subcommand("run", "run the duration sweep and write the data files");
    run->add_option("--config", config_path, "configuration file");
    run->add_option("--jobs", jobs, "parallel workers for the sweep")->check(CLI::PositiveNumber);
    run->add_option("--out", out_dir, "output directory (overrides [output] directory)");
    run->add_option("--durations", durations_csv, "comma list of 2*kappa*T values");

    CLI::App* validate = app.add_subcommand("validate", "run the regime checks only");
    validate->add_option("--config", config_path, "configuration file");
    validate->add_option("--durations", durations_csv, "comma list of 2*kappa*T values");

    CLI::App* scaling = app.add_subcommand("scaling", "verify the 1/omega_sg^2 noise scaling");
    scaling->add_option("--config", config_path, "configuration file");
    scaling->add_option("--factors", factors_csv, "comma list of omega_sg multipliers");
    scaling->add_option("--t-total", scaling_t_total, "duration 2*kappa*T for the check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        memsim::RunConfig cfg = load_config(config_path);
        if (!durations_csv.empty()) {
            cfg.sweep.durations = memsim::parse_duration_list(durations_csv);
            cfg.validate();
        }
        if (!out_dir.empty()) cfg.output.directory = out_dir;

        if (run->parsed()) {
            const memsim::SweepOutcome outcome = memsim::run_sweep(cfg, jobs);
            memsim::write_outputs(cfg, outcome);
            std::cout << memsim::format_summary(cfg, outcome);
            double total = 0.0;
            for (const auto& row : outcome.rows) total += row.seconds;
            std::fprintf(stdout, "# wall clock: %.2f s over %zu durations\n", total,
                         outcome.rows.size());
            return outcome.all_ok ? kOk : kRunFailure;
        }

        if (validate->parsed()) {
            bool all_pass = true;
            for (double t_total : cfg.sweep.durations) {
                const memsim::ValidationResult row =
                    memsim::validate_one_duration(cfg, t_total);
                if (!row.completed) {
                    std::printf("tau_total=%g FAILED: %s\n", t_total, row.error.c_str());
                    all_pass = false;
                    continue;
                }
                std::printf("tau_total=%g regime=%s (depletion=%.4g, peak=%.4g)\n", t_total,
                            row.regime.pass ? "pass" : "fail", row.regime.depletion_integral,
                            row.regime.depletion_peak);
                for (const auto& c : row.regime.checks)
                    std::printf("  %-22s %.6g < %.6g : %s\n", c.name.c_str(), c.value,
                                c.threshold, c.pass ? "pass" : "fail");
                all_pass = all_pass && row.regime.pass;
            }
            return all_pass ? kOk : kRunFailure;
        }

        // scaling
        const std::vector<double> factors = memsim::parse_duration_list(factors_csv);
        if (factors.empty()) throw memsim::ConfigError("empty factor list");
        const memsim::ScalingTable table =
            memsim::run_scaling_check(cfg, factors, scaling_t_total);
        std::cout << memsim::format_scaling_table(table);
        bool exact = true;
        for (const auto& row : table.rows)
            exact = exact &&
                    std::abs(row.g_dminus_ratio * row.factor * row.factor - 1.0) < 1e-10;
        return exact ? kOk : kRunFailure;
    } catch (const memsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRunFailure;
    }
}
