// population_dynamics.hpp: three-level rate equations, their biexponential solution,
// an RK4 reference integrator and the finite-efficiency π-pulse maps.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "qthermo/bath_physics.hpp"
#include "qthermo/constants.hpp"
#include "qthermo/device.hpp"
#include "qthermo/errors.hpp"

namespace qthermo {

// (p_g, p_e, p_f)
template <typename Scalar>
using Population = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Generator = Eigen::Matrix<Scalar, 3, 3>;

inline constexpr double kProbabilityTolerance = 1e-9;

template <typename Scalar>
void validate_population(const Population<Scalar>& p) {
    using std::abs;
    const Scalar tol = Scalar(kProbabilityTolerance);
    if (!p.allFinite()) throw DomainError("population vector has non-finite entries");
    if ((p.array() < -tol).any() || (p.array() > Scalar(1) + tol).any()) {
        throw DomainError("population entries must lie in [0, 1]");
    }
    if (abs(p.sum() - Scalar(1)) > tol) throw DomainError("population vector must sum to 1");
}

// Transfer rates of the ODE, in 1/s.
template <typename Scalar>
struct RateSet {
    Scalar ge_up{};
    Scalar ge_down{};
    Scalar ef_up{};
    Scalar ef_down{};

    Scalar total() const { return ge_up + ge_down + ef_up + ef_down; }
    Scalar max_rate() const { return std::max({ge_up, ge_down, ef_up, ef_down}); }

    // dp/dt = L p
    Generator<Scalar> generator() const {
        Generator<Scalar> L;
        L << -ge_up, ge_down, Scalar(0),
             ge_up, -(ge_down + ef_up), ef_down,
             Scalar(0), ef_up, -ef_down;
        return L;
    }
};

template <typename Scalar>
void validate_rates(const RateSet<Scalar>& r) {
    detail::require_non_negative(r.ge_up, "ge_up rate");
    detail::require_non_negative(r.ge_down, "ge_down rate");
    detail::require_non_negative(r.ef_up, "ef_up rate");
    detail::require_non_negative(r.ef_down, "ef_down rate");
}

// How γ₁⁰ and extra relaxation are split into up and down rates.
//   split_total: Γ↓+Γ↑ = γ₁⁰ + extra, divided by detailed balance at T
//   bath:        Γ↓ = γ₁⁰(n+1), Γ↑ = γ₁⁰n, extra split by detailed balance
enum class RateModel { split_total, bath };

template <typename Scalar>
struct RateOptions {
    LifetimeConvention convention{LifetimeConvention::two_pi};
    RateModel model{RateModel::split_total};
};

template <typename Scalar>
struct ExtraRelaxation {
    Scalar ge{};  // rad/s
    Scalar ef{};  // rad/s
};

namespace detail {

template <typename Scalar>
std::pair<Scalar, Scalar> split_rates(Scalar base, Scalar extra, Scalar omega, Scalar temperature, RateModel model) {
    const Scalar n = bose_einstein(omega, temperature);
    const Scalar w_down = (n + Scalar(1)) / (Scalar(2) * n + Scalar(1));
    const Scalar w_up = n / (Scalar(2) * n + Scalar(1));
    if (model == RateModel::split_total) {
        const Scalar tot = base + extra;
        return {tot * w_up, tot * w_down};
    }
    return {base * n + extra * w_up, base * (n + Scalar(1)) + extra * w_down};
}

}  // namespace detail

template <typename Scalar>
RateSet<Scalar> rate_set(const DeviceParams<Scalar>& qubit, Scalar temperature,
                         ExtraRelaxation<Scalar> extra = {}, RateOptions<Scalar> options = {}) {
    detail::require_positive(temperature, "temperature");
    detail::require_positive(qubit.gamma1_base, "gamma1_base");
    detail::require_positive(qubit.ef_rate_factor, "ef_rate_factor");
    detail::require_non_negative(extra.ge, "extra ge relaxation");
    detail::require_non_negative(extra.ef, "extra ef relaxation");
    const auto [ge_up, ge_down] =
        detail::split_rates(qubit.gamma1_base, extra.ge, qubit.omega_ge, temperature, options.model);
    const auto [ef_up, ef_down] = detail::split_rates(qubit.ef_rate_factor * qubit.gamma1_base, extra.ef,
                                                      qubit.omega_ef, temperature, options.model);
    RateSet<Scalar> r;
    r.ge_up = transfer_rate(ge_up, options.convention);
    r.ge_down = transfer_rate(ge_down, options.convention);
    r.ef_up = transfer_rate(ef_up, options.convention);
    r.ef_down = transfer_rate(ef_down, options.convention);
    return r;
}

template <typename Scalar>
Scalar partition_function(const RateSet<Scalar>& r) {
    detail::require_positive(r.ge_down, "ge_down rate");
    detail::require_positive(r.ef_down, "ef_down rate");
    const Scalar ratio_e = r.ge_up / r.ge_down;
    return Scalar(1) + ratio_e + ratio_e * r.ef_up / r.ef_down;
}

template <typename Scalar>
Population<Scalar> steady_state(const RateSet<Scalar>& r) {
    validate_rates(r);
    const Scalar z = partition_function(r);
    const Scalar ratio_e = r.ge_up / r.ge_down;
    return Population<Scalar>(Scalar(1), ratio_e, ratio_e * r.ef_up / r.ef_down) / z;
}

enum class CoefficientMethod { closed_form, projector, degenerate };

// p(t) = ζ e^{α₀t} + η e^{α₁t} + ξ, with α₁ ≤ α₀ < 0.
template <typename Scalar>
struct EvolutionCoefficients {
    Scalar alpha0{};
    Scalar alpha1{};
    Population<Scalar> zeta = Population<Scalar>::Zero();
    Population<Scalar> eta = Population<Scalar>::Zero();
    Population<Scalar> xi = Population<Scalar>::Zero();
    CoefficientMethod method{CoefficientMethod::closed_form};

    bool degenerate() const { return method == CoefficientMethod::degenerate; }

    Population<Scalar> at(Scalar t) const {
        using std::exp;
        return zeta * exp(alpha0 * t) + eta * exp(alpha1 * t) + xi;
    }
};

// Roots of α² + Sα + P with S the sum of the four rates.
template <typename Scalar>
std::pair<Scalar, Scalar> decay_exponents(const RateSet<Scalar>& r) {
    using std::sqrt;
    const Scalar s = r.total();
    const Scalar p = r.ge_down * r.ef_down + r.ge_up * r.ef_up + r.ge_up * r.ef_down;
    const Scalar u = r.ge_up + r.ge_down - r.ef_up - r.ef_down;
    // S² − 4P written without cancellation
    const Scalar root = sqrt(u * u + Scalar(4) * r.ge_down * r.ef_up);
    const Scalar alpha1 = -(s + root) / Scalar(2);
    if (alpha1 == Scalar(0)) return {Scalar(0), Scalar(0)};
    return {p / alpha1, alpha1};
}

template <typename Scalar>
EvolutionCoefficients<Scalar> evolution_coefficients(const Population<Scalar>& p0, const RateSet<Scalar>& r) {
    using std::abs;
    validate_population(p0);
    validate_rates(r);
    EvolutionCoefficients<Scalar> c;
    c.xi = steady_state(r);
    std::tie(c.alpha0, c.alpha1) = decay_exponents(r);

    const Scalar s = r.total();
    if (abs(c.alpha0 - c.alpha1) < Scalar(1e-9) * abs(c.alpha0) || c.alpha0 == Scalar(0)) {
        c.method = CoefficientMethod::degenerate;
        return c;
    }

    const Population<Scalar> d = p0 - c.xi;
    const Scalar gap = c.alpha0 - c.alpha1;
    const Scalar floor = Scalar(1e-6) * s;
    const bool well_conditioned = r.ef_up > floor && abs(c.alpha0 + r.ge_up) > floor && abs(c.alpha1 + r.ge_up) > floor;

    if (well_conditioned) {
        const Scalar zf = (r.ef_up * d(1) - (r.ef_down + c.alpha1) * d(2)) / gap;
        const Scalar ef = ((r.ef_down + c.alpha0) * d(2) - r.ef_up * d(1)) / gap;
        const Scalar ze = (c.alpha0 + r.ef_down) / r.ef_up * zf;
        const Scalar ee = (c.alpha1 + r.ef_down) / r.ef_up * ef;
        c.zeta = Population<Scalar>(r.ge_down / (c.alpha0 + r.ge_up) * ze, ze, zf);
        c.eta = Population<Scalar>(r.ge_down / (c.alpha1 + r.ge_up) * ee, ee, ef);
        c.method = CoefficientMethod::closed_form;
    } else {
        // p0 − ξ lies in the invariant subspace of α₀, α₁; project with (L − α)/(α' − α)
        const Generator<Scalar> L = r.generator();
        const Generator<Scalar> I = Generator<Scalar>::Identity();
        c.zeta = (L - c.alpha1 * I) * d / gap;
        c.eta = (L - c.alpha0 * I) * d / (-gap);
        c.method = CoefficientMethod::projector;
    }
    return c;
}

// Classical fixed-step RK4 on dp/dt = L p; the step is shrunk so that it divides t.
template <typename Scalar>
Population<Scalar> evolve_numeric(const Population<Scalar>& p0, const RateSet<Scalar>& r, Scalar t, Scalar dt) {
    using std::ceil;
    validate_rates(r);
    detail::require_non_negative(t, "evolution time");
    detail::require_positive(dt, "time step");
    const Scalar m = r.max_rate();
    if (m > Scalar(0) && !(dt < Scalar(0.1) / m)) {
        throw DomainError("evolve_numeric: time step must be below 0.1/max rate");
    }
    if (t == Scalar(0) || m == Scalar(0)) return p0;
    const long steps = static_cast<long>(ceil(t / dt));
    const Scalar h = t / Scalar(steps);
    const Generator<Scalar> L = r.generator();
    Population<Scalar> p = p0;
    for (long i = 0; i < steps; ++i) {
        const Population<Scalar> k1 = L * p;
        const Population<Scalar> k2 = L * (p + h / 2 * k1);
        const Population<Scalar> k3 = L * (p + h / 2 * k2);
        const Population<Scalar> k4 = L * (p + h * k3);
        p += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return p;
}

template <typename Scalar>
Scalar default_time_step(const RateSet<Scalar>& r, Scalar t) {
    const Scalar m = r.max_rate();
    Scalar dt = m > Scalar(0) ? Scalar(1e-3) / m : t;
    if (t > Scalar(0) && dt > t) dt = t;
    return dt > Scalar(0) ? dt : Scalar(1);
}

template <typename Scalar>
Population<Scalar> evolve_analytic(const EvolutionCoefficients<Scalar>& c, const Population<Scalar>& p0,
                                   const RateSet<Scalar>& r, Scalar t) {
    detail::require_non_negative(t, "evolution time");
    if (c.degenerate()) return evolve_numeric(p0, r, t, default_time_step(r, t));
    return c.at(t);
}

template <typename Scalar>
Population<Scalar> evolve_analytic(const Population<Scalar>& p0, const RateSet<Scalar>& r, Scalar t) {
    detail::require_non_negative(t, "evolution time");
    if (t == Scalar(0) || r.total() == Scalar(0)) {
        validate_population(p0);
        return p0;
    }
    return evolve_analytic(evolution_coefficients(p0, r), p0, r, t);
}

namespace detail {

// expm1(z)/z
template <typename Scalar>
Scalar relative_expm1(Scalar z) {
    using std::abs;
    using std::expm1;
    if (abs(z) < Scalar(1e-8)) return Scalar(1) + z / Scalar(2);
    return expm1(z) / z;
}

}  // namespace detail

// (1/τ)∫₀^τ p(t) dt
template <typename Scalar>
Population<Scalar> time_averaged(const Population<Scalar>& p0, const RateSet<Scalar>& r, Scalar window) {
    using std::ceil;
    detail::require_non_negative(window, "readout window");
    validate_population(p0);
    if (window == Scalar(0) || r.total() == Scalar(0)) return p0;
    const auto c = evolution_coefficients(p0, r);
    if (!c.degenerate()) {
        return c.xi + c.zeta * detail::relative_expm1(c.alpha0 * window) +
               c.eta * detail::relative_expm1(c.alpha1 * window);
    }
    // augmented RK4 carrying ∫p dt
    const Scalar dt = default_time_step(r, window);
    const long steps = static_cast<long>(ceil(window / dt));
    const Scalar h = window / Scalar(steps);
    const Generator<Scalar> L = r.generator();
    Population<Scalar> p = p0;
    Population<Scalar> acc = Population<Scalar>::Zero();
    for (long i = 0; i < steps; ++i) {
        const Population<Scalar> k1 = L * p;
        const Population<Scalar> p2 = p + h / 2 * k1;
        const Population<Scalar> k2 = L * p2;
        const Population<Scalar> p3 = p + h / 2 * k2;
        const Population<Scalar> k3 = L * p3;
        const Population<Scalar> p4 = p + h * k3;
        const Population<Scalar> k4 = L * p4;
        acc += h / 6 * (p + 2 * p2 + 2 * p3 + p4);
        p += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return acc / window;
}

enum class PulseKind { ge, ef };

template <typename Scalar>
Generator<Scalar> pulse_matrix(PulseKind kind, Scalar efficiency) {
    if (!(efficiency >= Scalar(0) && efficiency <= Scalar(1))) {
        throw DomainError("pulse efficiency must lie in [0, 1]");
    }
    const Scalar d = efficiency;
    const Scalar k = Scalar(1) - d;
    Generator<Scalar> m;
    if (kind == PulseKind::ge) {
        m << k, d, Scalar(0),
             d, k, Scalar(0),
             Scalar(0), Scalar(0), Scalar(1);
    } else {
        m << Scalar(1), Scalar(0), Scalar(0),
             Scalar(0), k, d,
             Scalar(0), d, k;
    }
    return m;
}

template <typename Scalar>
Population<Scalar> apply_pulse(const Population<Scalar>& p, PulseKind kind, Scalar efficiency) {
    const Generator<Scalar> m = pulse_matrix(kind, efficiency);
    if (efficiency == Scalar(1)) {
        // exact swap keeps the sum bit-for-bit
        Population<Scalar> q = p;
        if (kind == PulseKind::ge) std::swap(q(0), q(1));
        else std::swap(q(1), q(2));
        return q;
    }
    return m * p;
}

}  // namespace qthermo
