#include "memsim/control.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memsim/quadrature.hpp"

namespace memsim {

namespace {

// Loss part of the balance right-hand side (everything except the total
// derivative of E0^2), evaluable at arbitrary t from the closed-form envelope:
//   f(t) = 2 kappa_eff E0^2 + 4 (gamma/Delta^2) |Omega S|^2.
struct BalanceLoss {
    const SignalMode& mode;
    double kappa_eff;
    double gamma_over_delta_sq;  // gamma / Delta^2
    double product_scale_sq;     // |Delta (1 - i gamma/Delta) / (g sqrt(N))|^2

    double operator()(double t) const {
        const double e0 = mode.value_at(t);
        const double de0 = mode.derivative_at(t);
        const double drive = de0 + kappa_eff * e0;
        const double os_sq = product_scale_sq * drive * drive;
        return 2.0 * kappa_eff * e0 * e0 + 4.0 * gamma_over_delta_sq * os_sq;
    }
};

BalanceLoss make_balance_loss(const SignalMode& m, const PhysicalParams& p) {
    const DerivedRates r = derive_rates(p);
    const double gn = p.g_root_n();
    if (!(gn > 0.0)) throw std::invalid_argument("control: g sqrt(N) must be positive");
    const double ratio = p.gamma_perp / p.delta;
    const double scale_sq = (p.delta / gn) * (p.delta / gn) * (1.0 + ratio * ratio);
    return {m, r.kappa_eff, p.gamma_perp / (p.delta * p.delta), scale_sq};
}

// Cumulative loss integral on the quarter lattice (spacing h/4), with
// analytic midpoint evaluations.  Shared by the balance and the spin phase.
std::vector<double> loss_cumulative(const SignalMode& m, const BalanceLoss& loss) {
    const int nq = 4 * (m.grid.n - 1) + 1;
    return cumulative_simpson(loss, 0.0, m.grid.step() / 4.0, nq);
}

}  // namespace

std::vector<cplx> compute_omega_s(const SignalMode& m, const PhysicalParams& p) {
    const DerivedRates r = derive_rates(p);
    const double gn = p.g_root_n();
    if (!(gn > 0.0)) throw std::invalid_argument("compute_omega_s: g sqrt(N) must be positive");
    const cplx prefactor = (p.delta / gn) * cplx(1.0, -p.gamma_perp / p.delta);

    const std::size_t n = m.samples.size();
    std::vector<cplx> os(n);
    for (std::size_t k = 0; k < n; ++k)
        os[k] = prefactor * (m.derivative[k] + r.kappa_eff * m.samples[k]);
    return os;
}

BalanceResult integrate_balance(const SignalMode& m, const PhysicalParams& p,
                                std::span<const cplx> omega_s, double floor_eps) {
    if (!(floor_eps > 0.0)) throw std::invalid_argument("integrate_balance: floor must be positive");
    if (omega_s.size() != static_cast<std::size_t>(m.grid.n))
        throw std::invalid_argument("integrate_balance: grid mismatch");

    const BalanceLoss loss = make_balance_loss(m, p);
    const std::vector<double> cum = loss_cumulative(m, loss);
    const double hq = m.grid.step() / 4.0;

    // relative trajectory R(t) = -E0^2(t) - int_0^t loss; |S|^2 = |S(0)|^2 + R
    std::vector<double> rel(cum.size());
    std::size_t argmin = 0;
    for (std::size_t j = 0; j < cum.size(); ++j) {
        const double e0 = m.value_at(static_cast<double>(j) * hq);
        rel[j] = -e0 * e0 - cum[j];
        if (rel[j] < rel[argmin]) argmin = j;
    }
    // the true minimum sits between lattice points; refine with the parabola
    // through the three neighbours
    double min_r = rel[argmin];
    if (argmin > 0 && argmin + 1 < rel.size()) {
        const double lo = rel[argmin - 1], mid = rel[argmin], hi = rel[argmin + 1];
        const double curv = lo - 2.0 * mid + hi;
        if (curv > 0.0) min_r = mid - (lo - hi) * (lo - hi) / (8.0 * curv);
    }
    const double pop0 = floor_eps - min_r;
    if (pop0 < 1.0)
        throw std::runtime_error("integrate_balance: |S(0)|^2 < 1 (eta would exceed 1)");

    BalanceResult out;
    out.spin_pop.resize(static_cast<std::size_t>(m.grid.n));
    for (int k = 0; k < m.grid.n; ++k) {
        const double e0 = m.samples[static_cast<std::size_t>(k)];
        out.spin_pop[static_cast<std::size_t>(k)] =
            pop0 - e0 * e0 - cum[static_cast<std::size_t>(4 * k)];
    }
    out.eta = 1.0 / pop0;
    out.residual = out.spin_pop.back();
    return out;
}

std::vector<double> compute_spin_phase(const SignalMode& m, const PhysicalParams& p,
                                       std::span<const double> spin_pop) {
    if (spin_pop.size() != static_cast<std::size_t>(m.grid.n))
        throw std::invalid_argument("compute_spin_phase: grid mismatch");
    if (p.gamma_perp == 0.0) return std::vector<double>(spin_pop.size(), 0.0);

    const DerivedRates r = derive_rates(p);
    const BalanceLoss loss = make_balance_loss(m, p);
    const std::vector<double> cum = loss_cumulative(m, loss);
    const double hq = m.grid.step() / 4.0;
    const double pop0 = spin_pop[0];  // E0(0) = 0 and the cumulative starts at 0

    // integrand on the quarter lattice
    std::vector<double> q(cum.size());
    for (std::size_t j = 0; j < cum.size(); ++j) {
        const double t = static_cast<double>(j) * hq;
        const double e0 = m.value_at(t);
        const double de0 = m.derivative_at(t);
        const double pop = pop0 - e0 * e0 - cum[j];
        q[j] = (2.0 * e0 * de0 + 2.0 * r.kappa_eff * e0 * e0) / pop;
    }
    // Simpson over quarter-interval pairs gives the phase on the half lattice
    const std::vector<double> phase_half = pairwise_cumulative_simpson(q, hq);

    std::vector<double> phase(static_cast<std::size_t>(m.grid.n));
    const double scale = -p.gamma_perp / p.delta;
    for (int k = 0; k < m.grid.n; ++k)
        phase[static_cast<std::size_t>(k)] = scale * phase_half[static_cast<std::size_t>(2 * k)];
    return phase;
}

SynthesizedField synthesize_control(std::span<const cplx> omega_s,
                                    std::span<const double> spin_pop,
                                    std::span<const double> spin_phase, double omega_cap) {
    const std::size_t n = omega_s.size();
    if (spin_pop.size() != n || spin_phase.size() != n)
        throw std::invalid_argument("synthesize_control: grid mismatch");

    SynthesizedField out;
    out.spin.resize(n);
    out.control.resize(n);
    std::size_t capped = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx s = std::sqrt(spin_pop[k]) * std::exp(cplx(0.0, spin_phase[k]));
        out.spin[k] = s;
        cplx omega = omega_s[k] / s;
        const double mag = std::abs(omega);
        if (mag > omega_cap) {
            omega *= omega_cap / mag;
            ++capped;
        }
        out.control[k] = omega;
        out.omega_max = std::max(out.omega_max, std::abs(omega));
    }
    out.capped_fraction = static_cast<double>(capped) / static_cast<double>(n);
    if (out.capped_fraction > 0.01)
        throw std::runtime_error("synthesize_control: control cap exceeded on more than 1% of the grid");
    return out;
}

ControlSolution synthesize(const SignalMode& m, const PhysicalParams& p,
                           const ControlOptions& opt) {
    const DerivedRates r = derive_rates(p);

    ControlSolution sol;
    sol.grid = m.grid;
    sol.floor = opt.floor_eps;
    sol.omega_cap = opt.omega_cap_factor * std::abs(p.delta) * r.kappa_eff / p.g_root_n();

    sol.omega_s_product = compute_omega_s(m, p);
    BalanceResult bal = integrate_balance(m, p, sol.omega_s_product, opt.floor_eps);
    sol.spin_pop = std::move(bal.spin_pop);
    sol.eta = bal.eta;
    sol.residual = bal.residual;
    sol.spin_phase = compute_spin_phase(m, p, sol.spin_pop);

    SynthesizedField field =
        synthesize_control(sol.omega_s_product, sol.spin_pop, sol.spin_phase, sol.omega_cap);
    sol.spin = std::move(field.spin);
    sol.control = std::move(field.control);
    sol.capped_fraction = field.capped_fraction;
    sol.omega_max = field.omega_max;
    return sol;
}

}  // namespace memsim
