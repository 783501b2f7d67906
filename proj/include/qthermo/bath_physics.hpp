// bath_physics.hpp: Bose-Einstein occupations, ohmic bath rates, multi-bath steady
// state, effective temperatures and the thermalization relations of γ₁ and n̄.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>

#include "qthermo/constants.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

template <typename Scalar>
struct BathSpec {
    Scalar temperature{};  // K
    Scalar base_rate{};    // γ₁⁽ⁱ⁾, rad/s
};

template <typename Scalar>
struct TransitionRates {
    Scalar up{};    // Γ↑
    Scalar down{};  // Γ↓
};

template <typename Scalar>
struct SteadyState {
    Scalar pe_over_pg{};
    Scalar mean_photon_number{};
    Scalar total_gamma1{};
    Scalar effective_temperature{};
};

// ħω/k_B T
template <typename Scalar>
Scalar reduced_energy(Scalar omega, Scalar temperature) {
    detail::require_positive(omega, "omega");
    detail::require_positive(temperature, "temperature");
    return Constants<Scalar>::hbar * omega / (Constants<Scalar>::k_B * temperature);
}

template <typename Scalar>
Scalar bose_einstein(Scalar omega, Scalar temperature) {
    using std::expm1;
    return Scalar(1) / expm1(reduced_energy(omega, temperature));
}

// p_e/p_g of a two-level system in equilibrium at `temperature`.
template <typename Scalar>
Scalar boltzmann_ratio(Scalar omega, Scalar temperature) {
    using std::exp;
    return exp(-reduced_energy(omega, temperature));
}

template <typename Scalar>
TransitionRates<Scalar> bath_rates(const BathSpec<Scalar>& bath, Scalar omega) {
    detail::require_non_negative(bath.base_rate, "bath base rate");
    const Scalar n = bose_einstein(omega, bath.temperature);
    return {bath.base_rate * n, bath.base_rate * (n + Scalar(1))};
}

template <typename Scalar>
Scalar teff_from_ratio(Scalar ratio, Scalar omega) {
    using std::isfinite;
    using std::log;
    detail::require_positive(omega, "omega");
    if (!isfinite(ratio) || !(ratio > Scalar(0)) || !(ratio < Scalar(1))) {
        throw DomainError("population ratio must lie in (0, 1); got inversion or degenerate input");
    }
    return Constants<Scalar>::hbar * omega / Constants<Scalar>::k_B / (-log(ratio));
}

template <typename Scalar>
SteadyState<Scalar> aggregate_baths(std::span<const BathSpec<Scalar>> baths, Scalar omega) {
    if (baths.empty()) {
        throw DomainError("aggregate_baths: empty bath list");
    }
    Scalar up{0}, down{0};
    for (const auto& bath : baths) {
        const auto r = bath_rates(bath, omega);
        up += r.up;
        down += r.down;
    }
    if (!(down > Scalar(0))) {
        throw DomainError("aggregate_baths: all bath rates are zero");
    }
    SteadyState<Scalar> s;
    s.pe_over_pg = up / down;
    s.mean_photon_number = up / (down - up);
    s.total_gamma1 = up + down;
    s.effective_temperature = teff_from_ratio(s.pe_over_pg, omega);
    return s;
}

// p_i = exp(−E_i/k_B T)/Z for ascending level energies.
template <typename Scalar, int N>
Eigen::Matrix<Scalar, N, 1> boltzmann_populations(const Eigen::Matrix<Scalar, N, 1>& level_energies,
                                                  Scalar temperature) {
    using std::exp;
    detail::require_positive(temperature, "temperature");
    for (Eigen::Index i = 1; i < level_energies.size(); ++i) {
        if (level_energies(i) < level_energies(i - 1)) {
            throw DomainError("boltzmann_populations: level energies must be sorted ascending");
        }
    }
    const Scalar kT = Constants<Scalar>::k_B * temperature;
    const Scalar e0 = level_energies(0);
    Eigen::Matrix<Scalar, N, 1> p = level_energies.unaryExpr([&](Scalar e) { return exp(-(e - e0) / kT); });
    return p / p.sum();
}

// Three-level populations for transition frequencies ω_ge, ω_ef.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> boltzmann_populations(Scalar omega_ge, Scalar omega_ef, Scalar temperature) {
    const Scalar hbar = Constants<Scalar>::hbar;
    const Eigen::Matrix<Scalar, 3, 1> energies(Scalar(0), hbar * omega_ge, hbar * (omega_ge + omega_ef));
    return boltzmann_populations<Scalar, 3>(energies, temperature);
}

// γ₁⁰·coth(ħω/2k_B T) = γ₁⁰[2n + 1]
template <typename Scalar>
Scalar gamma1_vs_T(Scalar gamma1_base, Scalar omega, Scalar temperature) {
    detail::require_positive(gamma1_base, "gamma1_base");
    return gamma1_base * (Scalar(2) * bose_einstein(omega, temperature) + Scalar(1));
}

// n(T_eff) = slope·n(T_MXC) + n0
template <typename Scalar>
Scalar photon_mixing_relation(Scalar n_mxc, Scalar slope, Scalar n0) {
    if (!(slope >= Scalar(0) && slope <= Scalar(1))) {
        throw DomainError("photon_mixing_relation: slope must lie in [0, 1]");
    }
    detail::require_non_negative(n0, "n0");
    detail::require_non_negative(n_mxc, "n_mxc");
    return slope * n_mxc + n0;
}

template <typename Scalar>
Scalar resonator_teff(Scalar n_mean, Scalar omega_r) {
    using std::log1p;
    detail::require_positive(n_mean, "mean photon number");
    detail::require_positive(omega_r, "omega_r");
    return Constants<Scalar>::hbar * omega_r / Constants<Scalar>::k_B / log1p(Scalar(1) / n_mean);
}

// Temperature at which the Bose occupation of `omega` equals n.
template <typename Scalar>
Scalar temperature_from_occupation(Scalar n, Scalar omega) {
    return resonator_teff(n, omega);
}

}  // namespace qthermo
