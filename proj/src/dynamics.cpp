#include "memsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "memsim/quadrature.hpp"

namespace memsim {

namespace {

// Local cubic (Catmull-Rom) interpolation of complex samples on a uniform
// grid; the stencil is shifted at the boundaries.
class CubicInterp {
  public:
    CubicInterp(std::span<const cplx> samples, double step) : y_(samples), h_(step) {
        if (y_.size() < 4) throw std::invalid_argument("CubicInterp: need at least 4 samples");
    }

    cplx operator()(double t) const {
        const double u = t / h_;
        const auto last = static_cast<long>(y_.size()) - 3;
        const long i = std::clamp(static_cast<long>(std::floor(u)), 1L, last);
        const double s = u - static_cast<double>(i);
        const cplx p0 = y_[static_cast<std::size_t>(i - 1)];
        const cplx p1 = y_[static_cast<std::size_t>(i)];
        const cplx p2 = y_[static_cast<std::size_t>(i + 1)];
        const cplx p3 = y_[static_cast<std::size_t>(i + 2)];
        return p1 + 0.5 * s * (p2 - p0 +
                               s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
                                    s * (3.0 * (p1 - p2) + p3 - p0)));
    }

  private:
    std::span<const cplx> y_;
    double h_;
};

}  // namespace

SystemMatrix make_system_matrix(const PhysicalParams& p) {
    const DerivedRates r = derive_rates(p);
    SystemMatrix a;
    a.kappa_eff = r.kappa_eff;
    a.coupling = cplx(0.0, 1.0) * (p.g_root_n() / p.delta) * cplx(1.0, p.gamma_perp / p.delta);
    a.decay_coeff = 2.0 * p.gamma_perp / (p.delta * p.delta);
    return a;
}

PropagatorTable::PropagatorTable(TimeGrid grid, std::vector<Mat2> m_half,
                                 std::vector<Mat2> m_inv, double liouville_residual)
    : grid_(grid),
      m_half_(std::move(m_half)),
      m_inv_(std::move(m_inv)),
      liouville_residual_(liouville_residual) {}

Mat2 PropagatorTable::green(int i, int j) const {
    if (i < j) throw std::invalid_argument("PropagatorTable::green: needs t >= t'");
    if (j < 0 || i >= grid_.n) throw std::out_of_range("PropagatorTable::green: index");
    return fundamental(i) * fundamental_inv(j);
}

PropagatorTable build_propagator(const PhysicalParams& p, const ControlSolution& c,
                                 const TimeGrid& grid) {
    // the grid may be finer than the control's own (step-refinement checks);
    // the durations must agree
    if (c.grid.duration != grid.duration)
        throw std::invalid_argument("build_propagator: control and grid duration mismatch");

    const SystemMatrix sys = make_system_matrix(p);
    const CubicInterp omega(c.control, c.grid.step());

    const int n = grid.n;
    const double hs = grid.step() / 4.0;  // RK4 substep

    std::vector<Mat2> m_half;
    m_half.reserve(static_cast<std::size_t>(2 * n - 1));
    std::vector<Mat2> m_inv;
    m_inv.reserve(static_cast<std::size_t>(n));

    Mat2 m = Mat2::identity();
    m_half.push_back(m);
    m_inv.push_back(m.inverse());

    double cum = 0.0;  // int_0^t tr A
    double liouville = 0.0;
    for (int step = 0; step < 4 * (n - 1); ++step) {
        const double t = static_cast<double>(step) * hs;
        const Mat2 a0 = sys.at(omega(t));
        const Mat2 am = sys.at(omega(t + 0.5 * hs));
        const Mat2 a1 = sys.at(omega(t + hs));

        const Mat2 k1 = a0 * m;
        const Mat2 k2 = am * (m + (0.5 * hs) * k1);
        const Mat2 k3 = am * (m + (0.5 * hs) * k2);
        const Mat2 k4 = a1 * (m + hs * k3);
        m = m + (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        cum += hs / 6.0 * ((a0.ee + a0.ss) + 4.0 * (am.ee + am.ss) + (a1.ee + a1.ss)).real();

        if ((step + 1) % 2 == 0) m_half.push_back(m);
        if ((step + 1) % 4 == 0) {
            const double det = std::abs(m.det());
            if (det < 1e-12)
                throw std::runtime_error("build_propagator: fundamental matrix degenerate");
            const double expected = std::exp(cum);
            liouville = std::max(liouville, std::abs(std::abs(m.det()) - expected) / expected);
            m_inv.push_back(m.inverse());
        }
    }

    return PropagatorTable(grid, std::move(m_half), std::move(m_inv), liouville);
}

MatchingReport verify_impedance_matching(const PropagatorTable& tab, const SignalMode& m,
                                         double eta) {
    const int n = tab.size();
    if (m.grid.n != n) throw std::invalid_argument("verify_impedance_matching: grid mismatch");

    std::vector<cplx> overlap(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        overlap[static_cast<std::size_t>(k)] =
            m.samples[static_cast<std::size_t>(k)] * tab.fundamental(k).es;
    const cplx proj = 2.0 * m.kappa * simpson<cplx>(overlap, m.grid.step());

    MatchingReport rep;
    rep.theta_r = std::arg(proj);
    rep.projection_mag = std::abs(proj);

    const cplx phase = std::exp(cplx(0.0, rep.theta_r));
    const double root_eta = std::sqrt(eta);
    double peak = 0.0, worst = 0.0;
    for (int k = 0; k < n; ++k) {
        const double e0 = m.samples[static_cast<std::size_t>(k)];
        peak = std::max(peak, e0);
        worst = std::max(worst, std::abs(tab.fundamental(k).es - root_eta * phase * e0));
    }
    rep.residual = worst / peak;
    return rep;
}

OracleTrajectories oracle_first_elimination(const PhysicalParams& p, const ControlSolution& c,
                                            cplx field0, cplx spin0, int samples_per_period) {
    if (samples_per_period < 40)
        throw std::invalid_argument(
            "oracle_first_elimination: grid too coarse for the oscillation period");

    const DerivedRates r = derive_rates(p);
    const double gn_over_delta = p.g_root_n() / p.delta;
    const cplx c_mem = cplx(0.0, 1.0) * gn_over_delta * cplx(1.0, p.gamma_perp / p.delta);
    // luminescence coupling kept at zeroth order in gamma/Delta
    const cplx c_lum = cplx(0.0, 1.0) * gn_over_delta;
    const double two_wsg = 2.0 * p.omega_sg;

    const double h = c.grid.step();
    const double period = 2.0 * 3.14159265358979323846 / std::abs(two_wsg);
    const int sub = std::max(
        1, static_cast<int>(std::ceil(h / (period / static_cast<double>(samples_per_period)))));
    const double hs = h / static_cast<double>(sub);

    const CubicInterp omega(c.control, h);

    // state (E, S, E*, S*); the conjugates are carried explicitly because the
    // oscillating terms couple to them
    struct State {
        cplx e, s, ec, sc;
    };
    auto deriv = [&](double t, const State& y) {
        const cplx om = omega(t);
        const double decay = 2.0 * p.gamma_perp * std::norm(om) / (p.delta * p.delta);
        const cplx osc = std::exp(cplx(0.0, two_wsg * t));
        State d;
        d.e = -r.kappa_eff * y.e + c_mem * om * y.s + c_lum * om * osc * y.sc;
        d.s = -decay * y.s + c_mem * std::conj(om) * y.e + c_lum * om * osc * y.ec;
        d.ec = -r.kappa_eff * y.ec + std::conj(c_mem * om) * y.sc +
               std::conj(c_lum * om * osc) * y.s;
        d.sc = -decay * y.sc + std::conj(c_mem) * om * y.ec + std::conj(c_lum * om * osc) * y.e;
        return d;
    };
    auto axpy = [](const State& y, double a, const State& d) {
        return State{y.e + a * d.e, y.s + a * d.s, y.ec + a * d.ec, y.sc + a * d.sc};
    };

    OracleTrajectories out;
    out.field.resize(static_cast<std::size_t>(c.grid.n));
    out.spin.resize(static_cast<std::size_t>(c.grid.n));
    State y{field0, spin0, std::conj(field0), std::conj(spin0)};
    out.field[0] = y.e;
    out.spin[0] = y.s;

    for (int k = 0; k + 1 < c.grid.n; ++k) {
        double t = c.grid.time(k);
        for (int j = 0; j < sub; ++j) {
            const State k1 = deriv(t, y);
            const State k2 = deriv(t + 0.5 * hs, axpy(y, 0.5 * hs, k1));
            const State k3 = deriv(t + 0.5 * hs, axpy(y, 0.5 * hs, k2));
            const State k4 = deriv(t + hs, axpy(y, hs, k3));
            y.e += hs / 6.0 * (k1.e + 2.0 * k2.e + 2.0 * k3.e + k4.e);
            y.s += hs / 6.0 * (k1.s + 2.0 * k2.s + 2.0 * k3.s + k4.s);
            y.ec += hs / 6.0 * (k1.ec + 2.0 * k2.ec + 2.0 * k3.ec + k4.ec);
            y.sc += hs / 6.0 * (k1.sc + 2.0 * k2.sc + 2.0 * k3.sc + k4.sc);
            t += hs;
        }
        out.field[static_cast<std::size_t>(k + 1)] = y.e;
        out.spin[static_cast<std::size_t>(k + 1)] = y.s;
    }
    return out;
}

}  // namespace memsim
