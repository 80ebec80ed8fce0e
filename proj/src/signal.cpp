#include "memsim/signal.hpp"

#include <cmath>
#include <stdexcept>

#include "memsim/quadrature.hpp"

namespace memsim {

namespace {

const double kTruncation = std::exp(-4.0);  // truncation level of the envelope

double shape(double x) {  // x = t/T
    const double u = x - 0.5;
    return std::exp(-16.0 * u * u) - kTruncation;
}

double shape_deriv(double x) {
    const double u = x - 0.5;
    return -32.0 * u * std::exp(-16.0 * u * u);
}

// int_0^1 shape(x)^2 dx in closed form
double shape_sq_integral() {
    const double pi = 3.14159265358979323846;
    return std::sqrt(pi / 32.0) * std::erf(std::sqrt(32.0) / 2.0) -
           2.0 * kTruncation * std::sqrt(pi / 16.0) * std::erf(2.0) +
           kTruncation * kTruncation;
}

}  // namespace

double SignalMode::value_at(double t) const {
    return norm_coeff * shape(t / grid.duration);
}

double SignalMode::derivative_at(double t) const {
    return norm_coeff * shape_deriv(t / grid.duration) / grid.duration;
}

SignalMode make_target_mode(double T, double kappa, int n) {
    if (!(T > 0.0)) throw std::invalid_argument("make_target_mode: nonpositive duration");
    if (!(kappa > 0.0)) throw std::invalid_argument("make_target_mode: nonpositive kappa");
    if (n < 64) throw std::invalid_argument("make_target_mode: need at least 64 samples");

    SignalMode m;
    m.grid = TimeGrid(T, n);
    m.kappa = kappa;
    m.norm_coeff = 1.0 / std::sqrt(2.0 * kappa * T * shape_sq_integral());

    m.samples.resize(static_cast<std::size_t>(n));
    m.derivative.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double t = m.grid.time(k);
        m.samples[static_cast<std::size_t>(k)] = m.value_at(t);
        m.derivative[static_cast<std::size_t>(k)] = m.derivative_at(t);
    }
    // exact zeros at the truncation points
    m.samples.front() = 0.0;
    m.samples.back() = 0.0;

    std::vector<double> e0sq(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double v = m.samples[static_cast<std::size_t>(k)];
        e0sq[static_cast<std::size_t>(k)] = v * v;
    }
    const double norm = 2.0 * kappa * simpson<double>(e0sq, m.grid.step());
    if (std::abs(norm - 1.0) > 1e-8)
        throw std::invalid_argument("make_target_mode: grid too coarse, normalization off by " +
                                    std::to_string(norm - 1.0));
    return m;
}

double mode_width_check(const SignalMode& m) {
    // Solved on the analytic envelope, so the result is grid independent.
    const double T = m.grid.duration;
    const double peak = m.value_at(T / 2.0);
    const double level = peak / 2.718281828459045235;
    double lo = T / 2.0, hi = T;  // E0 decreases monotonically on [T/2, T]
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (m.value_at(mid) > level ? lo : hi) = mid;
    }
    const double t_right = 0.5 * (lo + hi);
    return 2.0 * (t_right - T / 2.0) / T;
}

}  // namespace memsim
