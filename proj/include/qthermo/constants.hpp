// constants.hpp: CODATA 2018 constants, unit conversions, and the rate/lifetime convention
//
// Internal units are SI with angular frequencies: rad/s, K, s, J.  Everything
// user-facing (GHz as ω/2π, mK, μs, μeV, MHz·h) is converted here.

#pragma once

#include <numbers>

namespace qthermo {

template <typename Scalar = double>
struct Constants {
    static constexpr Scalar hbar = Scalar(1.054571817e-34L);   // J s
    static constexpr Scalar h = Scalar(6.62607015e-34L);       // J s
    static constexpr Scalar k_B = Scalar(1.380649e-23L);       // J/K
    static constexpr Scalar e = Scalar(1.602176634e-19L);      // C
    static constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    static constexpr Scalar euler_gamma = std::numbers::egamma_v<Scalar>;
};

namespace units {

template <typename Scalar = double>
constexpr Scalar omega_from_ghz(Scalar f_ghz) { return Constants<Scalar>::two_pi * f_ghz * Scalar(1e9); }
template <typename Scalar = double>
constexpr Scalar ghz_from_omega(Scalar omega) { return omega / (Constants<Scalar>::two_pi * Scalar(1e9)); }

template <typename Scalar = double>
constexpr Scalar omega_from_mhz(Scalar f_mhz) { return Constants<Scalar>::two_pi * f_mhz * Scalar(1e6); }
template <typename Scalar = double>
constexpr Scalar mhz_from_omega(Scalar omega) { return omega / (Constants<Scalar>::two_pi * Scalar(1e6)); }

template <typename Scalar = double>
constexpr Scalar kelvin_from_mk(Scalar t_mk) { return t_mk * Scalar(1e-3); }
template <typename Scalar = double>
constexpr Scalar mk_from_kelvin(Scalar t) { return t * Scalar(1e3); }

template <typename Scalar = double>
constexpr Scalar seconds_from_us(Scalar t_us) { return t_us * Scalar(1e-6); }
template <typename Scalar = double>
constexpr Scalar us_from_seconds(Scalar t) { return t * Scalar(1e6); }
template <typename Scalar = double>
constexpr Scalar seconds_from_ns(Scalar t_ns) { return t_ns * Scalar(1e-9); }

// Gap quoted as Δ/e in μV.
template <typename Scalar = double>
constexpr Scalar joule_from_uev(Scalar e_uev) { return e_uev * Scalar(1e-6) * Constants<Scalar>::e; }
template <typename Scalar = double>
constexpr Scalar uev_from_joule(Scalar e_j) { return e_j / (Scalar(1e-6) * Constants<Scalar>::e); }

// Energies quoted as E/h in MHz (charging energy).
template <typename Scalar = double>
constexpr Scalar joule_from_mhz_h(Scalar f_mhz) { return Constants<Scalar>::h * f_mhz * Scalar(1e6); }
template <typename Scalar = double>
constexpr Scalar mhz_h_from_joule(Scalar e_j) { return e_j / (Constants<Scalar>::h * Scalar(1e6)); }

template <typename Scalar = double>
constexpr Scalar ohm_from_kohm(Scalar r_kohm) { return r_kohm * Scalar(1e3); }

}  // namespace units

// How an angular rate γ maps onto a lifetime τ.  `two_pi` is τ = 2π/γ, `unit`
// is τ = 1/γ.  Population transfer rates used by the rate equations are always
// 1/τ, so the convention decides how fast a given γ empties a level.
enum class LifetimeConvention { two_pi, unit };

template <typename Scalar>
constexpr Scalar convention_factor(LifetimeConvention c) {
    return c == LifetimeConvention::two_pi ? Constants<Scalar>::two_pi : Scalar(1);
}

template <typename Scalar>
constexpr Scalar lifetime_from_rate(Scalar gamma, LifetimeConvention c = LifetimeConvention::two_pi) {
    return convention_factor<Scalar>(c) / gamma;
}

template <typename Scalar>
constexpr Scalar rate_from_lifetime(Scalar tau, LifetimeConvention c = LifetimeConvention::two_pi) {
    return convention_factor<Scalar>(c) / tau;
}

// 1/τ for an angular rate γ.
template <typename Scalar>
constexpr Scalar transfer_rate(Scalar gamma, LifetimeConvention c = LifetimeConvention::two_pi) {
    return gamma / convention_factor<Scalar>(c);
}

}  // namespace qthermo
