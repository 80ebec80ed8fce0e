#pragma once

#include <vector>

#include "memsim/grid.hpp"

namespace memsim {

// Prescribed output temporal mode: a quasi-Gaussian envelope
//   E0(t) = N_E [exp(-16 (t/T - 1/2)^2) - e^-4],
// truncated to zero at both ends and normalized to 2 kappa int_0^T E0^2 dt = 1.
struct SignalMode {
    TimeGrid grid;
    double kappa = 0.0;       // cavity rate entering the normalization (rad/s)
    double norm_coeff = 0.0;  // N_E
    std::vector<double> samples;     // E0(t_k)
    std::vector<double> derivative;  // dE0/dt(t_k), closed form

    // closed-form envelope and derivative at arbitrary t in [0, T]
    double value_at(double t) const;
    double derivative_at(double t) const;
};

// Builds the target mode on a uniform n-point grid.  N_E is solved in closed
// form (erf); construction fails if the grid is too coarse for the Simpson
// quadrature of the normalization to hold to 1e-8 relative.
SignalMode make_target_mode(double T, double kappa, int n);

// Full width of the envelope at relative level 1/e of the peak, divided by T.
// Evaluated on the analytic envelope, so it is grid independent (~0.492).
double mode_width_check(const SignalMode& m);

}  // namespace memsim
