#pragma once

#include <span>
#include <vector>

#include "memsim/control.hpp"
#include "memsim/mat2.hpp"
#include "memsim/params.hpp"
#include "memsim/signal.hpp"

namespace memsim {

// Coefficient matrix A(t) of the two-band equations of motion,
//   d/dt (E, S)^T = A(t) (E, S)^T,
// with A11 = -kappa_eff, A12 = i (g sqrt(N)/Delta)(1 + i gamma/Delta) Omega,
// A21 the same with Omega -> Omega*, A22 = -2 gamma |Omega|^2 / Delta^2.
// The Raman correction delta_R is omitted.
struct SystemMatrix {
    double kappa_eff = 0.0;
    cplx coupling{};             // i (g sqrt(N)/Delta)(1 + i gamma/Delta)
    double decay_coeff = 0.0;    // 2 gamma / Delta^2

    Mat2 at(cplx omega) const {
        const double om_sq = std::norm(omega);
        return {cplx(-kappa_eff, 0.0), coupling * omega,
                coupling * std::conj(omega), cplx(-decay_coeff * om_sq, 0.0)};
    }
};

SystemMatrix make_system_matrix(const PhysicalParams& p);

// Samples of the fundamental matrix M(t) of the two-band system, M(0) = I.
// Green kernels come out as G(t, t') = M(t) M(t')^{-1} for t >= t'.
class PropagatorTable {
  public:
    PropagatorTable(TimeGrid grid, std::vector<Mat2> m_half, std::vector<Mat2> m_inv,
                    double liouville_residual);

    const TimeGrid& grid() const { return grid_; }
    int size() const { return grid_.n; }

    const Mat2& fundamental(int k) const { return m_half_[static_cast<std::size_t>(2 * k)]; }
    const Mat2& fundamental_inv(int k) const { return m_inv_[static_cast<std::size_t>(k)]; }
    // M at the half-step lattice point j (spacing h/2), used by the
    // projection quadratures
    const Mat2& fundamental_half(int j) const { return m_half_[static_cast<std::size_t>(j)]; }

    // G(t_i, t_j), i >= j
    Mat2 green(int i, int j) const;

    // max relative deviation of det M from exp(int tr A) over the grid
    double liouville_residual() const { return liouville_residual_; }

  private:
    TimeGrid grid_;
    std::vector<Mat2> m_half_;  // M on the h/2 lattice, 2n-1 entries
    std::vector<Mat2> m_inv_;   // M^{-1} on the main grid
    double liouville_residual_ = 0.0;
};

// Integrates dM/dt = A(t) M with a fixed-step RK4 at substep h/4; Omega is
// interpolated between samples with a local cubic.  Throws if |det M| falls
// below 1e-12 (a bounded tr A cannot produce that).
PropagatorTable build_propagator(const PhysicalParams& p, const ControlSolution& c,
                                 const TimeGrid& grid);

struct MatchingReport {
    double theta_r = 0.0;         // arg(2 kappa int E0 G_ES(t,0) dt)
    double residual = 0.0;        // max_t |G_ES(t,0) - sqrt(eta) e^{i theta_R} E0| / max E0
    double projection_mag = 0.0;  // |P_dS(T,0)| for cross-checking sqrt(eta)
};

// Checks the impedance-matching relation G_ES(t,0) = sqrt(eta) e^{i theta_R} E0(t)
// for the synthesized control; eta is the balance efficiency.
MatchingReport verify_impedance_matching(const PropagatorTable& tab, const SignalMode& m,
                                         double eta);

struct OracleTrajectories {
    std::vector<cplx> field;  // E(t_k)
    std::vector<cplx> spin;   // S(t_k)
};

// Reference integrator for the pre-two-band equations of motion, keeping the
// luminescence terms oscillating at 2 omega_sg (semiclassical, no noise).
// The internal step resolves the oscillation with at least samples_per_period
// points (>= 40 required).
OracleTrajectories oracle_first_elimination(const PhysicalParams& p, const ControlSolution& c,
                                            cplx field0, cplx spin0,
                                            int samples_per_period = 40);

}  // namespace memsim
