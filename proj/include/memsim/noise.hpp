#pragma once

#include <vector>

#include "memsim/control.hpp"
#include "memsim/dynamics.hpp"
#include "memsim/params.hpp"
#include "memsim/signal.hpp"

namespace memsim {

// Covariance powers of the combined Langevin sources.  Both atomic sources
// are proportional to the same reservoir amplitude, so the cross covariance
// is perfectly correlated: |A_ES|^2 = A_EE * A_SS.
struct NoiseCovariances {
    double a_ee = 0.0;             // A_EE = 2 gamma g^2 N / Delta^2
    double ss_coeff = 0.0;         // A_SS = ss_coeff |Omega|^2, ss_coeff = 2 gamma / Delta^2
    double es_coeff = 0.0;         // A_ES = es_coeff * Omega, es_coeff = 2 gamma g sqrt(N) / Delta^2
    double lum_coeff = 0.0;        // g sqrt(N) / (2 omega_sg Delta)

    double a_ss(cplx omega) const { return ss_coeff * std::norm(omega); }
    cplx a_es(cplx omega) const { return es_coeff * omega; }
    cplx lum_prefactor(cplx omega) const { return lum_coeff * omega; }
};

NoiseCovariances make_noise_covariances(const PhysicalParams& p);

// Projections of the Green kernels on the output temporal mode,
//   P_dE(T,t) = 2 kappa int_t^T E0(t') G_EE(t',t) dt',
//   P_dS(T,t) = 2 kappa int_t^T E0(t') G_ES(t',t) dt'.
struct Projections {
    std::vector<cplx> p_de;
    std::vector<cplx> p_ds;
};

// Single backward cumulative pass using G(t',t) = M(t') M(t)^{-1}.
Projections compute_projections(const PropagatorTable& tab, const SignalMode& m);

// |G_d-|^2: four-wave-mixing noise power picked up by the output mode.
double fwm_noise_power(const Projections& pr, const ControlSolution& c,
                       const PhysicalParams& p);

// |G_d+|^2: memory-channel vacuum power, combining the atomic sources, the
// intracavity input field and the direct -E_in reflection of the in-out
// relation.
double memory_channel_noise_power(const Projections& pr, const ControlSolution& c,
                                  const PhysicalParams& p, const SignalMode& m);

// 1/4 (1 - eta + 2 |G_d-|^2), the added quadrature noise of the device.
double added_noise_variance(double eta, double g_dminus_sq);

// Residual-spin statistics (appendix material): |G_S-|^2, |G_S+|^2, the
// vacuum-spin quadrature variance scale 1 + 2|G_S-|^2, and the commutator
// sum-rule residual for S(T).
struct SpinNoise {
    double g_sminus_sq = 0.0;
    double g_splus_sq = 0.0;
    double spin_var_x4 = 0.0;
    double sum_rule_s = 0.0;
};

SpinNoise spin_noise_budget(const PropagatorTable& tab, const ControlSolution& c,
                            const PhysicalParams& p);

// Parametric pair sum K = G_d- G_S-* <Phi_S^(-)dag Phi_d^(-)> entering the
// signal-spin covariance; vanishes with the pump.
cplx signal_spin_covariance(const Projections& pr, const PropagatorTable& tab,
                            const ControlSolution& c, const PhysicalParams& p);

// Memory-channel analog K+ = G_d+ G_S+* [Phi_d^(+), Phi_S^(+)dag], needed to
// close the [E_d, S^dag] commutator.
cplx memory_channel_pair_sum(const Projections& pr, const PropagatorTable& tab,
                             const ControlSolution& c, const PhysicalParams& p,
                             const SignalMode& m);

struct DepletionMetric {
    double peak = 0.0;      // max_t (2 gamma |Omega|^2 / Delta^2) * T
    double integral = 0.0;  // int_0^T 2 gamma |Omega|^2 / Delta^2 dt
};

DepletionMetric depletion_metric(const ControlSolution& c, const PhysicalParams& p, double T);

// Complete noise budget of one retrieval run.
struct NoiseBudget {
    double eta = 0.0;        // balance efficiency 1/|S(0)|^2
    double eta_green = 0.0;  // |P_dS(T,0)|^2
    double g_de_sq = 0.0;    // |P_dE(T,0)|^2
    double g_dplus_sq = 0.0;
    double g_dminus_sq = 0.0;
    double added_var_x4 = 0.0;  // (1 - eta) + 2 |G_d-|^2
    double sum_rule_d = 0.0;    // |G_dE|^2 + eta_green + |G_d+|^2 - |G_d-|^2 - 1
    double sum_rule_s = 0.0;
    cplx comm_ds{};             // residual of the [E_d, S^dag] relation
    double spin_gminus_sq = 0.0;
    double spin_gplus_sq = 0.0;
    double spin_var_x4 = 0.0;
    cplx covariance{};          // pair sum K
    double depletion = 0.0;     // peak-form metric D
    double depletion_integral = 0.0;
    double theta_r = 0.0;
    double matching_residual = 0.0;
};

// Variance of the measured output quadrature, 1/4 (1 + eta * spin_excess +
// 2 |G_d-|^2).  spin_excess is the normal-ordered quadrature excess of the
// initial spin at relative phase theta_diff = theta_R - theta_h (0 for
// vacuum or coherent, down to -1 for squeezed); the phase is already folded
// into spin_excess by the caller.
double output_quadrature_variance(const NoiseBudget& budget, double spin_excess,
                                  double theta_diff);

NoiseBudget compute_noise_budget(const SignalMode& m, const PhysicalParams& p,
                                 const ControlSolution& c, const PropagatorTable& tab);

}  // namespace memsim
