#include "memsim/quadrature.hpp"

namespace memsim {

std::vector<double> pairwise_cumulative_simpson(std::span<const double> q, double dq) {
    if (q.size() < 3 || q.size() % 2 == 0)
        throw std::invalid_argument("pairwise_cumulative_simpson: need odd sample count >= 3");
    const std::size_t pairs = (q.size() - 1) / 2;
    std::vector<double> out(pairs + 1, 0.0);
    for (std::size_t j = 0; j < pairs; ++j)
        out[j + 1] = out[j] + dq / 3.0 * (q[2 * j] + 4.0 * q[2 * j + 1] + q[2 * j + 2]);
    return out;
}

}  // namespace memsim
