#include "memsim/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "memsim/quadrature.hpp"

namespace memsim {

namespace {

// Spin-row Green kernels (G_SE(T,t_k), G_SS(T,t_k)) for every grid point.
struct SpinKernels {
    std::vector<cplx> se, ss;
};

SpinKernels spin_kernels(const PropagatorTable& tab) {
    const int n = tab.size();
    const Mat2& mt = tab.fundamental(n - 1);
    SpinKernels k;
    k.se.resize(static_cast<std::size_t>(n));
    k.ss.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const Mat2& inv = tab.fundamental_inv(j);
        // row (se, ss) of M(T) times M(t)^{-1}
        k.se[static_cast<std::size_t>(j)] = mt.se * inv.ee + mt.ss * inv.se;
        k.ss[static_cast<std::size_t>(j)] = mt.se * inv.es + mt.ss * inv.ss;
    }
    return k;
}

// Luminescence-channel quadratic form shared by |G_d-|^2, |G_S-|^2 and the
// pair sums: integrand factor at one grid point for kernel rows (uE, uS) and
// (vE, vS),
//   uE vE* A_SS + uE vS* A_ES + uS vE* A_ES* + uS vS* (A_EE + 2 kappa).
cplx lum_pair_term(cplx u_e, cplx u_s, cplx v_e, cplx v_s, cplx omega,
                   const NoiseCovariances& cov, double kappa) {
    const double ass = cov.a_ss(omega);
    const cplx aes = cov.a_es(omega);
    return u_e * std::conj(v_e) * ass + u_e * std::conj(v_s) * aes +
           u_s * std::conj(v_e) * std::conj(aes) +
           u_s * std::conj(v_s) * (cov.a_ee + 2.0 * kappa);
}

}  // namespace

NoiseCovariances make_noise_covariances(const PhysicalParams& p) {
    if (p.delta == 0.0 || p.omega_sg == 0.0)
        throw std::invalid_argument("make_noise_covariances: delta and omega_sg must be nonzero");
    NoiseCovariances cov;
    const double d2 = p.delta * p.delta;
    cov.a_ee = 2.0 * p.gamma_perp * p.g_sq_n() / d2;
    cov.ss_coeff = 2.0 * p.gamma_perp / d2;
    cov.es_coeff = 2.0 * p.gamma_perp * p.g_root_n() / d2;
    cov.lum_coeff = p.g_root_n() / (2.0 * p.omega_sg * p.delta);
    return cov;
}

Projections compute_projections(const PropagatorTable& tab, const SignalMode& m) {
    const int n = tab.size();
    if (m.grid.n != n) throw std::invalid_argument("compute_projections: grid mismatch");
    const double h = m.grid.step();
    const double two_kappa = 2.0 * m.kappa;

    // backward Simpson accumulation of W(t) = 2k int_t^T E0(t') row_E(M(t')) dt'
    std::vector<cplx> w1(static_cast<std::size_t>(n)), w2(static_cast<std::size_t>(n));
    w1[static_cast<std::size_t>(n - 1)] = 0.0;
    w2[static_cast<std::size_t>(n - 1)] = 0.0;
    for (int k = n - 2; k >= 0; --k) {
        const Mat2& ma = tab.fundamental_half(2 * k);
        const Mat2& mm = tab.fundamental_half(2 * k + 1);
        const Mat2& mb = tab.fundamental_half(2 * k + 2);
        const double ea = m.samples[static_cast<std::size_t>(k)];
        const double em = m.value_at(m.grid.time(k) + 0.5 * h);
        const double eb = m.samples[static_cast<std::size_t>(k + 1)];
        w1[static_cast<std::size_t>(k)] =
            w1[static_cast<std::size_t>(k + 1)] +
            two_kappa * h / 6.0 * (ea * ma.ee + 4.0 * em * mm.ee + eb * mb.ee);
        w2[static_cast<std::size_t>(k)] =
            w2[static_cast<std::size_t>(k + 1)] +
            two_kappa * h / 6.0 * (ea * ma.es + 4.0 * em * mm.es + eb * mb.es);
    }

    Projections pr;
    pr.p_de.resize(static_cast<std::size_t>(n));
    pr.p_ds.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Mat2& inv = tab.fundamental_inv(k);
        const cplx a = w1[static_cast<std::size_t>(k)];
        const cplx b = w2[static_cast<std::size_t>(k)];
        // row vector (a, b) times M(t)^{-1}
        pr.p_de[static_cast<std::size_t>(k)] = a * inv.ee + b * inv.se;
        pr.p_ds[static_cast<std::size_t>(k)] = a * inv.es + b * inv.ss;
    }
    return pr;
}

double fwm_noise_power(const Projections& pr, const ControlSolution& c,
                       const PhysicalParams& p) {
    const std::size_t n = pr.p_de.size();
    if (c.control.size() != n) throw std::invalid_argument("fwm_noise_power: grid mismatch");
    const NoiseCovariances cov = make_noise_covariances(p);

    std::vector<double> integrand(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx om = c.control[k];
        const cplx term =
            lum_pair_term(pr.p_de[k], pr.p_ds[k], pr.p_de[k], pr.p_ds[k], om, cov, p.kappa);
        integrand[k] = std::norm(om) * term.real();
    }
    const double pref = cov.lum_coeff * cov.lum_coeff;
    const double value = pref * simpson<double>(integrand, c.grid.step());
    if (value < -1e-12)
        throw std::runtime_error("fwm_noise_power: negative power, quadrature or sign bug");
    return value;
}

double memory_channel_noise_power(const Projections& pr, const ControlSolution& c,
                                  const PhysicalParams& p, const SignalMode& m) {
    const std::size_t n = pr.p_de.size();
    if (c.control.size() != n || m.samples.size() != n)
        throw std::invalid_argument("memory_channel_noise_power: grid mismatch");
    const double gn = p.g_root_n();
    const double atomic_coeff = 2.0 * p.gamma_perp / (p.delta * p.delta);

    std::vector<double> integrand(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx reflect = pr.p_de[k] - m.samples[k];
        const cplx atomic = gn * pr.p_de[k] + std::conj(c.control[k]) * pr.p_ds[k];
        integrand[k] = 2.0 * m.kappa * std::norm(reflect) + atomic_coeff * std::norm(atomic);
    }
    const double value = simpson<double>(integrand, c.grid.step());
    if (value < -1e-12)
        throw std::runtime_error("memory_channel_noise_power: negative power");
    return value;
}

double added_noise_variance(double eta, double g_dminus_sq) {
    if (!(eta >= 0.0) || eta > 1.0)
        throw std::invalid_argument("added_noise_variance: eta must lie in [0, 1]");
    if (g_dminus_sq < 0.0)
        throw std::invalid_argument("added_noise_variance: negative |G_d-|^2");
    return 0.25 * (1.0 - eta + 2.0 * g_dminus_sq);
}

SpinNoise spin_noise_budget(const PropagatorTable& tab, const ControlSolution& c,
                            const PhysicalParams& p) {
    const int n = tab.size();
    if (c.grid.n != n) throw std::invalid_argument("spin_noise_budget: grid mismatch");
    const NoiseCovariances cov = make_noise_covariances(p);
    const SpinKernels ker = spin_kernels(tab);
    const double atomic_coeff = 2.0 * p.gamma_perp / (p.delta * p.delta);
    const double gn = p.g_root_n();

    std::vector<double> lum(static_cast<std::size_t>(n)), mem(static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
        const cplx om = c.control[k];
        lum[k] = std::norm(om) *
                 lum_pair_term(ker.se[k], ker.ss[k], ker.se[k], ker.ss[k], om, cov, p.kappa)
                     .real();
        const cplx atomic = gn * ker.se[k] + std::conj(om) * ker.ss[k];
        mem[k] = 2.0 * p.kappa * std::norm(ker.se[k]) + atomic_coeff * std::norm(atomic);
    }

    SpinNoise out;
    out.g_sminus_sq = cov.lum_coeff * cov.lum_coeff * simpson<double>(lum, c.grid.step());
    out.g_splus_sq = simpson<double>(mem, c.grid.step());
    out.spin_var_x4 = 1.0 + 2.0 * out.g_sminus_sq;
    out.sum_rule_s = std::norm(ker.se[0]) + std::norm(ker.ss[0]) + out.g_splus_sq -
                     out.g_sminus_sq - 1.0;
    return out;
}

cplx signal_spin_covariance(const Projections& pr, const PropagatorTable& tab,
                            const ControlSolution& c, const PhysicalParams& p) {
    const std::size_t n = pr.p_de.size();
    if (c.control.size() != n) throw std::invalid_argument("signal_spin_covariance: grid mismatch");
    const NoiseCovariances cov = make_noise_covariances(p);
    const SpinKernels ker = spin_kernels(tab);

    std::vector<cplx> integrand(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx om = c.control[k];
        integrand[k] = std::norm(om) *
                       lum_pair_term(pr.p_de[k], pr.p_ds[k], ker.se[k], ker.ss[k], om, cov,
                                     p.kappa);
    }
    return cov.lum_coeff * cov.lum_coeff * simpson<cplx>(integrand, c.grid.step());
}

cplx memory_channel_pair_sum(const Projections& pr, const PropagatorTable& tab,
                             const ControlSolution& c, const PhysicalParams& p,
                             const SignalMode& m) {
    const std::size_t n = pr.p_de.size();
    if (c.control.size() != n || m.samples.size() != n)
        throw std::invalid_argument("memory_channel_pair_sum: grid mismatch");
    const NoiseCovariances cov = make_noise_covariances(p);
    const SpinKernels ker = spin_kernels(tab);

    std::vector<cplx> integrand(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx om = c.control[k];
        const cplx aes = cov.a_es(om);
        // memory-channel covariances: A_EE on the E-E pairing, A_SS on S-S,
        // plus the direct-reflection overlap with the spin kernel
        integrand[k] = pr.p_de[k] * std::conj(ker.se[k]) * cov.a_ee +
                       pr.p_de[k] * std::conj(ker.ss[k]) * aes +
                       pr.p_ds[k] * std::conj(ker.se[k]) * std::conj(aes) +
                       pr.p_ds[k] * std::conj(ker.ss[k]) * cov.a_ss(om) +
                       2.0 * m.kappa * (pr.p_de[k] - m.samples[k]) * std::conj(ker.se[k]);
    }
    return simpson<cplx>(integrand, c.grid.step());
}

DepletionMetric depletion_metric(const ControlSolution& c, const PhysicalParams& p, double T) {
    const double coeff = 2.0 * p.gamma_perp / (p.delta * p.delta);
    std::vector<double> rate(c.control.size());
    double peak = 0.0;
    for (std::size_t k = 0; k < c.control.size(); ++k) {
        rate[k] = coeff * std::norm(c.control[k]);
        peak = std::max(peak, rate[k]);
    }
    DepletionMetric d;
    d.peak = peak * T;
    d.integral = simpson<double>(rate, c.grid.step());
    return d;
}

double output_quadrature_variance(const NoiseBudget& budget, double spin_excess,
                                  double theta_diff) {
    (void)theta_diff;  // already folded into spin_excess by the caller
    if (spin_excess < -1.0)
        throw std::invalid_argument("output_quadrature_variance: spin_excess below -1");
    return 0.25 * (1.0 + budget.eta * spin_excess + 2.0 * budget.g_dminus_sq);
}

NoiseBudget compute_noise_budget(const SignalMode& m, const PhysicalParams& p,
                                 const ControlSolution& c, const PropagatorTable& tab) {
    NoiseBudget b;
    const Projections pr = compute_projections(tab, m);
    const SpinKernels ker = spin_kernels(tab);

    b.eta = c.eta;
    b.eta_green = std::norm(pr.p_ds[0]);
    b.g_de_sq = std::norm(pr.p_de[0]);
    b.g_dminus_sq = fwm_noise_power(pr, c, p);
    b.g_dplus_sq = memory_channel_noise_power(pr, c, p, m);
    b.added_var_x4 = (1.0 - b.eta) + 2.0 * b.g_dminus_sq;
    b.sum_rule_d = b.g_de_sq + b.eta_green + b.g_dplus_sq - b.g_dminus_sq - 1.0;

    const SpinNoise sn = spin_noise_budget(tab, c, p);
    b.spin_gminus_sq = sn.g_sminus_sq;
    b.spin_gplus_sq = sn.g_splus_sq;
    b.spin_var_x4 = sn.spin_var_x4;
    b.sum_rule_s = sn.sum_rule_s;

    b.covariance = signal_spin_covariance(pr, tab, c, p);
    const cplx k_plus = memory_channel_pair_sum(pr, tab, c, p, m);
    b.comm_ds = pr.p_de[0] * std::conj(ker.se[0]) + pr.p_ds[0] * std::conj(ker.ss[0]) + k_plus -
                b.covariance;

    const DepletionMetric dep = depletion_metric(c, p, m.grid.duration);
    b.depletion = dep.peak;
    b.depletion_integral = dep.integral;

    const MatchingReport match = verify_impedance_matching(tab, m, c.eta);
    b.theta_r = match.theta_r;
    b.matching_residual = match.residual;
    return b;
}

}  // namespace memsim
