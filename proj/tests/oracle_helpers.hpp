#pragma once

// Independent reference calculations used by the tests.  Everything here is
// coded from the closed-form expressions, separately from the library paths
// it checks: trapezoid-free Simpson quadrature on explicit sample arrays,
// fixed-step RK4 with step halving, and raw envelope formulas.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "memsim/params.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline double shape(double x) {
    const double u = x - 0.5;
    return std::exp(-16.0 * u * u) - std::exp(-4.0);
}

inline double shape_deriv(double x) {
    const double u = x - 0.5;
    return -32.0 * u * std::exp(-16.0 * u * u);
}

// composite Simpson over [a, b] with an even number of intervals
template <class F>
double integrate(F&& f, double a, double b, int intervals) {
    if (intervals % 2 != 0) throw std::invalid_argument("oracle::integrate: odd interval count");
    const double h = (b - a) / intervals;
    double odd = 0.0, even = 0.0;
    for (int k = 1; k < intervals; k += 2) odd += f(a + k * h);
    for (int k = 2; k < intervals; k += 2) even += f(a + k * h);
    return h / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

// N_E solved from the high-resolution quadrature of the normalization integral
inline double norm_coeff(double T, double kappa, int intervals = 100000) {
    const double i1 = integrate([](double x) { return shape(x) * shape(x); }, 0.0, 1.0, intervals);
    return 1.0 / std::sqrt(2.0 * kappa * T * i1);
}

struct EnvelopeRef {
    double T, ne;
    EnvelopeRef(double duration, double kappa) : T(duration), ne(norm_coeff(duration, kappa)) {}
    double value(double t) const { return ne * shape(t / T); }
    double deriv(double t) const { return ne * shape_deriv(t / T) / T; }
};

// |Omega S|^2 from the control equation, raw formula
inline double omega_s_abs_sq(const EnvelopeRef& env, const memsim::PhysicalParams& p, double t) {
    const memsim::DerivedRates r = memsim::derive_rates(p);
    const double drive = env.deriv(t) + r.kappa_eff * env.value(t);
    const double ratio = p.gamma_perp / p.delta;
    const double scale = p.delta / p.g_root_n();
    return scale * scale * (1.0 + ratio * ratio) * drive * drive;
}

struct BalanceRun {
    double eta = 0.0;
    double pop0 = 0.0;
    double residual = 0.0;
    std::vector<double> pop;  // on the steps grid used at convergence
    int steps = 0;
};

// Excitations balance integrated once by fixed-step RK4 on the known
// right-hand side.
inline BalanceRun balance_trajectory(const memsim::PhysicalParams& p, double T, double eps,
                                     int steps) {
    const memsim::DerivedRates r = memsim::derive_rates(p);
    const EnvelopeRef env(T, p.kappa);
    auto rhs = [&](double t) {
        const double e0 = env.value(t);
        const double de0 = env.deriv(t);
        return -2.0 * e0 * de0 - 2.0 * r.kappa_eff * e0 * e0 -
               4.0 * p.gamma_perp / (p.delta * p.delta) * omega_s_abs_sq(env, p, t);
    };
    const double h = T / steps;
    std::vector<double> rel(static_cast<std::size_t>(steps) + 1, 0.0);
    std::size_t argmin = 0;
    for (int k = 0; k < steps; ++k) {
        const double t = k * h;
        const double k1 = rhs(t);
        const double k2 = rhs(t + 0.5 * h);  // = k3 for a quadrature RHS
        const double k4 = rhs(t + h);
        rel[static_cast<std::size_t>(k) + 1] =
            rel[static_cast<std::size_t>(k)] + h / 6.0 * (k1 + 4.0 * k2 + k4);
        if (rel[static_cast<std::size_t>(k) + 1] < rel[argmin])
            argmin = static_cast<std::size_t>(k) + 1;
    }
    double min_rel = rel[argmin];
    if (argmin > 0 && argmin + 1 < rel.size()) {  // parabolic vertex refinement
        const double lo = rel[argmin - 1], mid = rel[argmin], hi = rel[argmin + 1];
        const double curv = lo - 2.0 * mid + hi;
        if (curv > 0.0) min_rel = mid - (lo - hi) * (lo - hi) / (8.0 * curv);
    }
    BalanceRun out;
    out.pop0 = eps - min_rel;
    out.eta = 1.0 / out.pop0;
    out.residual = out.pop0 + rel.back();
    out.steps = steps;
    out.pop.resize(rel.size());
    for (std::size_t k = 0; k < rel.size(); ++k) out.pop[k] = out.pop0 + rel[k];
    return out;
}

// step halving until eta moves by less than tol (relative)
inline BalanceRun balance_eta(const memsim::PhysicalParams& p, double T, double eps,
                              double tol = 1e-9, int start_steps = 512) {
    double prev_eta = 0.0;
    for (int steps = start_steps; steps <= (1 << 22); steps *= 2) {
        BalanceRun run = balance_trajectory(p, T, eps, steps);
        if (prev_eta != 0.0 && std::abs(run.eta - prev_eta) < tol * run.eta) return run;
        prev_eta = run.eta;
    }
    throw std::runtime_error("oracle::balance_eta: no convergence");
}

// phi_s(T) by quadrature over the balance trajectory, halving until settled
inline double spin_phase_at_T(const memsim::PhysicalParams& p, double T, double eps,
                              double tol = 1e-9) {
    const memsim::DerivedRates r = memsim::derive_rates(p);
    const EnvelopeRef env(T, p.kappa);
    double prev = 0.0;
    for (int steps = 1024; steps <= (1 << 22); steps *= 2) {
        const BalanceRun run = balance_trajectory(p, T, eps, steps);
        const double h = T / steps;
        auto integrand = [&](int k) {
            const double t = k * h;
            const double e0 = env.value(t);
            const double de0 = env.deriv(t);
            return (2.0 * e0 * de0 + 2.0 * r.kappa_eff * e0 * e0) /
                   run.pop[static_cast<std::size_t>(k)];
        };
        double odd = 0.0, even = 0.0;
        for (int k = 1; k < steps; k += 2) odd += integrand(k);
        for (int k = 2; k < steps; k += 2) even += integrand(k);
        const double phi = -p.gamma_perp / p.delta *
                           (h / 3.0 * (integrand(0) + integrand(steps) + 4.0 * odd + 2.0 * even));
        if (prev != 0.0 && std::abs(phi - prev) < tol * std::abs(phi)) return phi;
        prev = phi;
    }
    throw std::runtime_error("oracle::spin_phase_at_T: no convergence");
}

inline memsim::PhysicalParams default_params() {
    constexpr double two_pi = 6.283185307179586476925287;
    return memsim::PhysicalParams::from_cooperativity(200.0, two_pi * 3e6, two_pi * 2e6,
                                                      two_pi * 200e6, two_pi * 10e6);
}

}  // namespace oracle
