#pragma once

#include <stdexcept>
#include <vector>

namespace memsim {

// Uniform time grid on [0, T]; t_0 = 0, t_{n-1} = T.
struct TimeGrid {
    double duration = 0.0;  // T (s)
    int n = 0;              // sample count

    TimeGrid() = default;
    TimeGrid(double T, int samples) : duration(T), n(samples) {
        if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: nonpositive duration");
        if (samples < 2) throw std::invalid_argument("TimeGrid: need at least 2 samples");
    }

    double step() const { return duration / (n - 1); }
    double time(int k) const { return k * step(); }

    std::vector<double> times() const {
        std::vector<double> t(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) t[static_cast<std::size_t>(k)] = time(k);
        return t;
    }
};

}  // namespace memsim
