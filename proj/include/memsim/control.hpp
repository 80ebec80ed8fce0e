#pragma once

#include <span>
#include <vector>

#include "memsim/mat2.hpp"
#include "memsim/params.hpp"
#include "memsim/signal.hpp"

namespace memsim {

struct ControlOptions {
    double floor_eps = 1e-3;        // minimum spin population kept above zero
    double omega_cap_factor = 10.0; // cap = factor * |Delta| kappa_eff / (g sqrt(N))
};

// Result of the inverse problem: the control field that makes the memory
// emit exactly the prescribed mode.
struct ControlSolution {
    TimeGrid grid;
    std::vector<cplx> omega_s_product;  // (Omega S)(t_k)
    std::vector<double> spin_pop;       // |S(t_k)|^2
    std::vector<double> spin_phase;     // phi_s(t_k), phi_s(0) = 0
    std::vector<cplx> spin;             // S = |S| e^{i phi_s}
    std::vector<cplx> control;          // Omega = (Omega S) / S
    double eta = 0.0;                   // 1 / |S(0)|^2
    double residual = 0.0;              // |S(T)|^2 left in the memory
    double floor = 0.0;                 // eps used for the population floor
    double omega_cap = 0.0;
    double capped_fraction = 0.0;       // fraction of samples clipped at the cap
    double omega_max = 0.0;             // max_t |Omega|
};

// (Omega S)(t) = (Delta / g sqrt(N)) (1 - i gamma/Delta) [d/dt + kappa_eff] E0(t).
std::vector<cplx> compute_omega_s(const SignalMode& m, const PhysicalParams& p);

struct BalanceResult {
    std::vector<double> spin_pop;  // on the mode grid
    double eta = 0.0;
    double residual = 0.0;
};

// Integrates the excitations balance
//   d|S|^2/dt = -d(E0^2)/dt - 2 kappa_eff E0^2 - 4 gamma |Omega S|^2 / Delta^2
// by quadrature of the known right-hand side; the additive constant |S(0)|^2
// is fixed so that min_t |S(t)|^2 = floor_eps.  Fails if |S(0)|^2 < 1.
BalanceResult integrate_balance(const SignalMode& m, const PhysicalParams& p,
                                std::span<const cplx> omega_s, double floor_eps);

// phi_s(t) = -(gamma/Delta) int_0^t dt' (1/|S|^2) [d/dt' + 2 kappa_eff] E0^2(t').
std::vector<double> compute_spin_phase(const SignalMode& m, const PhysicalParams& p,
                                       std::span<const double> spin_pop);

struct SynthesizedField {
    std::vector<cplx> spin;
    std::vector<cplx> control;
    double capped_fraction = 0.0;
    double omega_max = 0.0;
};

// S = sqrt(spin_pop) e^{i phi_s}; Omega = (Omega S)/S, with |Omega| clipped at
// omega_cap (flagged).  Throws if more than 1% of the grid needs clipping.
SynthesizedField synthesize_control(std::span<const cplx> omega_s,
                                    std::span<const double> spin_pop,
                                    std::span<const double> spin_phase, double omega_cap);

// Full pipeline: product, balance, phase, field.
ControlSolution synthesize(const SignalMode& m, const PhysicalParams& p,
                           const ControlOptions& opt = {});

}  // namespace memsim
