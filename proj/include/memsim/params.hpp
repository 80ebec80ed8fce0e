#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace memsim {

// Atom-cavity constants of the Raman memory cell.  All frequencies are
// angular (rad/s); delta and omega_sg are signed.  Only the combinations
// g*sqrt(N) and g^2*N enter the dynamics, so N is usually left at 1 and g
// carries the collective coupling.
struct PhysicalParams {
    double g = 0.0;           // atom-field coupling (rad/s)
    double atom_number = 1.0; // N
    double gamma_perp = 0.0;  // transverse relaxation gamma_perp (rad/s)
    double kappa = 0.0;       // cavity field decay (rad/s)
    double delta = 0.0;       // Raman detuning Delta (rad/s), nonzero
    double omega_sg = 0.0;    // spin transition frequency (rad/s), nonzero

    double g_root_n() const { return g * std::sqrt(atom_number); }
    double g_sq_n() const { return g * g * atom_number; }

    // Builds the parameter set from the cooperativity C = g^2 N / (gamma kappa),
    // solving for g at the given atom number.
    static PhysicalParams from_cooperativity(double cooperativity, double gamma_perp,
                                             double kappa, double delta, double omega_sg,
                                             double atom_number = 1.0);
};

// Rates derived from the physical constants.
struct DerivedRates {
    double cooperativity = 0.0;  // C = g^2 N / (gamma_perp kappa)
    double kappa_eff = 0.0;      // kappa + g^2 N gamma_perp / Delta^2
    double delta_c = 0.0;        // cavity mode shift -g^2 N / Delta
    double delta_s = 0.0;        // control-induced spin shift; 0 for equal channels

    double gamma_perp = 0.0;
    double delta = 0.0;
    double omega_sg = 0.0;
    double g_sq_n = 0.0;

    // spin decay rate 2 gamma_perp |Omega|^2 / Delta^2
    double spin_decay(double omega_abs_sq) const {
        return 2.0 * gamma_perp * omega_abs_sq / (delta * delta);
    }
    // Raman two-quantum frequency correction (diagnostic only, dropped from
    // the equations of motion)
    double delta_raman(double omega_abs_sq) const {
        return -g_sq_n * omega_abs_sq / (2.0 * omega_sg * delta * delta);
    }
};

// Pure closed-form mapping; rejects zero delta or omega_sg.
DerivedRates derive_rates(const PhysicalParams& p);

struct RegimeThresholds {
    double raman_ratio = 0.1;     // gamma/|Delta| and kappa/|Delta| must stay below
    double spin_gap_factor = 5.0; // 2|omega_sg| must exceed this times gamma
    double depletion = 0.1;       // ground-state depletion bound
};

struct RegimeCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct RegimeReport {
    std::vector<RegimeCheck> checks;
    double depletion_peak = 0.0;      // (2 gamma |Omega|_max^2 / Delta^2) T
    double depletion_integral = 0.0;  // int 2 gamma |Omega|^2 / Delta^2 dt, when supplied
    bool pass = false;

    const RegimeCheck* find(const std::string& name) const;
};

// Checks the operating point against the regime assumptions.  omega_max is
// max_t |Omega(t)| from a candidate control (or an a-priori bound).  When the
// caller knows the integral form of the depletion it should pass it here;
// the pass/fail then uses the integral (the actual relative ground-state
// depletion), with the peak form always reported.
RegimeReport validate_regime(const PhysicalParams& p, double omega_max, double T,
                             const RegimeThresholds& thresholds = {},
                             double depletion_integral = std::nan(""));

}  // namespace memsim
