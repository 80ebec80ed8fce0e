#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace memsim {

// Composite Simpson rule on uniformly spaced samples.  When the interval
// count is odd the last three intervals are closed with the 3/8 rule, so
// the scheme stays 4th order for any n >= 3.
template <class T>
T simpson(std::span<const T> y, double h) {
    const std::size_t n = y.size();
    if (n < 3) throw std::invalid_argument("simpson: need at least 3 samples");
    const std::size_t intervals = n - 1;
    std::size_t m = n;            // samples covered by the 1/3 rule
    T tail{};
    if (intervals % 2 != 0) {
        m = n - 3;
        tail = (3.0 * h / 8.0) * (y[n - 4] + 3.0 * y[n - 3] + 3.0 * y[n - 2] + y[n - 1]);
    }
    T odd{}, even{};
    for (std::size_t k = 1; k + 1 < m; k += 2) odd += y[k];
    for (std::size_t k = 2; k + 1 < m; k += 2) even += y[k];
    return (h / 3.0) * (y[0] + y[m - 1] + 4.0 * odd + 2.0 * even) + tail;
}

// Cumulative integral I[k] = int_{t0}^{t0 + k dt} f, one Simpson panel per
// step using a midpoint evaluation of f.  Global error O(dt^4).
template <class F>
std::vector<double> cumulative_simpson(F&& f, double t0, double dt, int count) {
    if (count < 1) throw std::invalid_argument("cumulative_simpson: empty grid");
    std::vector<double> out(static_cast<std::size_t>(count), 0.0);
    double fa = f(t0);
    for (int k = 0; k + 1 < count; ++k) {
        const double ta = t0 + k * dt;
        const double fm = f(ta + 0.5 * dt);
        const double fb = f(ta + dt);
        out[k + 1] = out[k] + dt / 6.0 * (fa + 4.0 * fm + fb);
        fa = fb;
    }
    return out;
}

// Cumulative integral over pairs of sub-intervals: given samples q on a
// lattice of spacing dq, returns values on the coarser lattice of spacing
// 2*dq using one Simpson panel per pair.
std::vector<double> pairwise_cumulative_simpson(std::span<const double> q, double dq);

}  // namespace memsim
