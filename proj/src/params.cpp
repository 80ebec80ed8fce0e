#include "memsim/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace memsim {

PhysicalParams PhysicalParams::from_cooperativity(double cooperativity, double gamma_perp,
                                                  double kappa, double delta, double omega_sg,
                                                  double atom_number) {
    if (!(cooperativity > 0.0))
        throw std::invalid_argument("from_cooperativity: cooperativity must be positive");
    if (!(gamma_perp > 0.0) || !(kappa > 0.0))
        throw std::invalid_argument("from_cooperativity: gamma_perp and kappa must be positive");
    if (!(atom_number >= 1.0))
        throw std::invalid_argument("from_cooperativity: atom_number must be >= 1");
    PhysicalParams p;
    p.g = std::sqrt(cooperativity * gamma_perp * kappa / atom_number);
    p.atom_number = atom_number;
    p.gamma_perp = gamma_perp;
    p.kappa = kappa;
    p.delta = delta;
    p.omega_sg = omega_sg;
    return p;
}

DerivedRates derive_rates(const PhysicalParams& p) {
    if (p.delta == 0.0) throw std::invalid_argument("derive_rates: delta must be nonzero");
    if (p.omega_sg == 0.0) throw std::invalid_argument("derive_rates: omega_sg must be nonzero");
    if (p.g < 0.0 || p.atom_number < 0.0 || p.gamma_perp < 0.0)
        throw std::invalid_argument("derive_rates: negative rate");
    if (!(p.kappa > 0.0)) throw std::invalid_argument("derive_rates: kappa must be positive");

    DerivedRates r;
    const double g2n = p.g_sq_n();
    r.cooperativity = p.gamma_perp > 0.0 ? g2n / (p.gamma_perp * p.kappa)
                                         : std::numeric_limits<double>::infinity();
    r.kappa_eff = p.kappa + g2n * p.gamma_perp / (p.delta * p.delta);
    r.delta_c = -g2n / p.delta;
    r.delta_s = 0.0;  // equal Lambda channels share Omega and Delta
    r.gamma_perp = p.gamma_perp;
    r.delta = p.delta;
    r.omega_sg = p.omega_sg;
    r.g_sq_n = g2n;
    return r;
}

const RegimeCheck* RegimeReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

RegimeReport validate_regime(const PhysicalParams& p, double omega_max, double T,
                             const RegimeThresholds& th, double depletion_integral) {
    RegimeReport rep;
    const double abs_delta = std::abs(p.delta);

    auto add = [&rep](std::string name, double value, double threshold) {
        rep.checks.push_back({std::move(name), value, threshold, value < threshold});
    };

    add("gamma_over_delta", p.gamma_perp / abs_delta, th.raman_ratio);
    add("kappa_over_delta", p.kappa / abs_delta, th.raman_ratio);
    // 2|omega_sg| >> gamma_perp: the two Raman channels must stay spectrally resolved
    add("gamma_over_spin_gap", p.gamma_perp * th.spin_gap_factor / (2.0 * std::abs(p.omega_sg)),
        1.0);

    rep.depletion_peak = 2.0 * p.gamma_perp * omega_max * omega_max / (p.delta * p.delta) * T;
    const bool have_integral = !std::isnan(depletion_integral);
    rep.depletion_integral = have_integral ? depletion_integral : rep.depletion_peak;
    add("depletion", rep.depletion_integral, th.depletion);

    rep.pass = true;
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    return rep;
}

}  // namespace memsim
