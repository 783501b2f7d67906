// quasiparticle.hpp: equilibrium quasiparticle relaxation and dephasing of a transmon

#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "qthermo/constants.hpp"
#include "qthermo/device.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/special_functions.hpp"

namespace qthermo {

// E_J from ħω_ge = √(8 E_J E_c) − E_c.
template <typename Scalar>
Scalar josephson_energy_from_spectrum(Scalar omega_ge, Scalar charging_energy) {
    detail::require_positive(omega_ge, "omega_ge");
    detail::require_positive(charging_energy, "charging energy");
    const Scalar root = Constants<Scalar>::hbar * omega_ge + charging_energy;
    return root * root / (Scalar(8) * charging_energy);
}

template <typename Scalar>
Scalar josephson_energy(const DeviceParams<Scalar>& qubit, const JunctionParams<Scalar>& junction) {
    if (junction.josephson_energy) return *junction.josephson_energy;
    return josephson_energy_from_spectrum(qubit.omega_ge, junction.charging_energy);
}

// ω_p = √(8 E_J E_c)/ħ; requires an explicit E_J.
template <typename Scalar>
Scalar plasma_frequency(const JunctionParams<Scalar>& junction) {
    using std::sqrt;
    if (!junction.josephson_energy) {
        throw DomainError("plasma_frequency: junction has no Josephson energy; derive it from the qubit spectrum");
    }
    detail::require_positive(*junction.josephson_energy, "Josephson energy");
    detail::require_positive(junction.charging_energy, "charging energy");
    return sqrt(Scalar(8) * *junction.josephson_energy * junction.charging_energy) / Constants<Scalar>::hbar;
}

template <typename Scalar>
Scalar plasma_frequency(const DeviceParams<Scalar>& qubit, const JunctionParams<Scalar>& junction) {
    JunctionParams<Scalar> resolved = junction;
    resolved.josephson_energy = josephson_energy(qubit, junction);
    return plasma_frequency(resolved);
}

// E_J/E_c; below ~20 the device is outside the transmon regime.
template <typename Scalar>
Scalar ej_over_ec(const DeviceParams<Scalar>& qubit, const JunctionParams<Scalar>& junction) {
    return josephson_energy(qubit, junction) / junction.charging_energy;
}

template <typename Scalar>
Scalar xqp_equilibrium(Scalar temperature, Scalar gap) {
    using std::exp;
    using std::sqrt;
    detail::require_positive(temperature, "temperature");
    detail::require_positive(gap, "gap");
    const Scalar kT = Constants<Scalar>::k_B * temperature;
    return sqrt(Constants<Scalar>::two_pi * kT / gap) * exp(-gap / kT);
}

template <typename Scalar>
struct QpRelaxation {
    Scalar density_term{};  // x_qp·√(2Δ/ħω) part
    Scalar bessel_term{};   // 4e^{−Δ/kT}·cosh(·)K₀(·) part
    Scalar rate{};          // γ₁^qp, rad/s
};

template <typename Scalar>
QpRelaxation<Scalar> gamma1_qp_terms(const DeviceParams<Scalar>& qubit, const JunctionParams<Scalar>& junction,
                                     Scalar temperature) {
    using std::exp;
    using std::sqrt;
    detail::require_positive(temperature, "temperature");
    detail::require_positive(qubit.omega_ge, "omega_ge");
    const Scalar hbar = Constants<Scalar>::hbar;
    const Scalar kT = Constants<Scalar>::k_B * temperature;
    const Scalar omega = qubit.omega_ge;
    const Scalar wp = plasma_frequency(qubit, junction);
    const Scalar half_x = hbar * omega / (Scalar(2) * kT);

    QpRelaxation<Scalar> r;
    r.density_term = xqp_equilibrium(temperature, junction.gap) * sqrt(Scalar(2) * junction.gap / (hbar * omega));
    r.bessel_term = Scalar(4) * exp(-junction.gap / kT) * cosh_times_k0(half_x);
    r.rate = wp * wp / omega / std::numbers::pi_v<Scalar> * (r.density_term + r.bessel_term);
    return r;
}

template <typename Scalar>
Scalar gamma1_qp(const DeviceParams<Scalar>& qubit, const JunctionParams<Scalar>& junction, Scalar temperature) {
    return gamma1_qp_terms(qubit, junction, temperature).rate;
}

// Pure dephasing from tunneling of equilibrium quasiparticles.
template <typename Scalar>
Scalar gamma_phi_qp_tunneling(const JunctionParams<Scalar>& junction, Scalar temperature) {
    using std::exp;
    detail::require_positive(temperature, "temperature");
    detail::require_positive(junction.gap, "gap");
    detail::require_positive(junction.charging_energy, "charging energy");
    const Scalar kT = Constants<Scalar>::k_B * temperature;
    return junction.charging_energy / (std::numbers::pi_v<Scalar> * Constants<Scalar>::hbar) * (kT / junction.gap) *
           exp(-junction.gap / kT);
}

// g_T/2g_K with g_T = 1/R_n and g_K = e²/h.
template <typename Scalar>
Scalar conductance_ratio(Scalar normal_resistance) {
    detail::require_positive(normal_resistance, "normal resistance");
    const Scalar e = Constants<Scalar>::e;
    const Scalar g_k = e * e / Constants<Scalar>::h;
    return Scalar(1) / normal_resistance / (Scalar(2) * g_k);
}

// N_e = ζ⁻¹·g_T/2g_K
template <typename Scalar>
Scalar andreev_channel_count(const JunctionParams<Scalar>& junction) {
    detail::require_positive(junction.subgap_transparency_inverse, "subgap transparency inverse");
    return junction.subgap_transparency_inverse * conductance_ratio(junction.normal_resistance);
}

// Order-of-magnitude estimate of dephasing by Andreev-state occupation
// fluctuations; the prefactor is taken literally.
template <typename Scalar>
Scalar gamma_phi_andreev(const DeviceParams<Scalar>& qubit, const JunctionParams<Scalar>& junction,
                         Scalar temperature) {
    using std::exp;
    using std::sqrt;
    detail::require_positive(temperature, "temperature");
    detail::require_positive(junction.gap, "gap");
    const Scalar n_e = andreev_channel_count(junction);
    const Scalar x_andreev = exp(-junction.gap / (Constants<Scalar>::k_B * temperature));
    const Scalar wp = plasma_frequency(qubit, junction);
    return Scalar(2) * Constants<Scalar>::two_pi * wp * wp / qubit.omega_ge * sqrt(x_andreev / n_e);
}

// γ_φ = γ₂ − γ₁/2
template <typename Scalar>
Scalar dephasing_from_decoherence(Scalar gamma2, Scalar gamma1) {
    using std::abs;
    detail::require_non_negative(gamma1, "gamma1");
    detail::require_non_negative(gamma2, "gamma2");
    const Scalar phi = gamma2 - gamma1 / Scalar(2);
    const Scalar tol = Scalar(64) * std::numeric_limits<Scalar>::epsilon() * (gamma2 + gamma1);
    if (phi < -tol) {
        throw DomainError("dephasing_from_decoherence: gamma2 < gamma1/2, decoherence faster than lifetime limit");
    }
    return phi < Scalar(0) ? Scalar(0) : phi;
}

}  // namespace qthermo
