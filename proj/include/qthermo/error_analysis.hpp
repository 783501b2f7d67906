// error_analysis.hpp: shot-noise propagation through the outcome differences, ratio and
// temperature errors, and the quantum Fisher information bounds.

#pragma once

#include <array>
#include <cmath>
#include <string>

#include "qthermo/bath_physics.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/protocol.hpp"
#include "qthermo/thermometry.hpp"

namespace qthermo {

template <typename Scalar>
struct NoiseModel {
    Scalar sigma_a{0};  // readout noise on each difference, readout units
    Scalar sigma_b{0};
    Scalar sigma_c{0};
    Scalar shots{1};    // N, averages per outcome

    // Independent noise σ_V on every outcome gives σ² = 2σ_V² on a difference.
    static NoiseModel from_outcome_sigma(Scalar sigma_v, Scalar shots = Scalar(1)) {
        using std::sqrt;
        const Scalar s = sqrt(Scalar(2)) * sigma_v;
        return {s, s, s, shots};
    }
};

template <typename Scalar>
void validate_noise(const NoiseModel<Scalar>& n) {
    detail::require_non_negative(n.sigma_a, "sigma_a");
    detail::require_non_negative(n.sigma_b, "sigma_b");
    detail::require_non_negative(n.sigma_c, "sigma_c");
    if (!(n.shots >= Scalar(1))) throw DomainError("shot count must be at least 1");
}

template <typename Scalar>
Scalar response_difference(const PureStateResponses<Scalar>& phi, Level i) {
    switch (i) {
        case Level::g: return phi.delta_g();
        case Level::e: return phi.delta_e();
        case Level::f: return phi.delta_f();
    }
    return Scalar(0);
}

// (Δφ_i, Δφ_j, Δφ_k) with i the column's level
template <typename Scalar>
std::array<Scalar, 3> ordered_differences(const PureStateResponses<Scalar>& phi, Level i) {
    switch (i) {
        case Level::g: return {phi.delta_g(), phi.delta_e(), phi.delta_f()};
        case Level::e: return {phi.delta_e(), phi.delta_f(), phi.delta_g()};
        case Level::f: return {phi.delta_f(), phi.delta_g(), phi.delta_e()};
    }
    return {};
}

// F(Δφ_i) = (Δφ_j² + Δφ_k²)/Δφ_i² for each index in turn.
template <typename Scalar>
std::array<Scalar, 3> f_function(const std::array<Scalar, 3>& delta_phi) {
    std::array<Scalar, 3> out{};
    for (std::size_t i = 0; i < 3; ++i) {
        const Scalar di = delta_phi[i];
        if (di == Scalar(0)) throw DomainError("f_function: response difference " + std::to_string(i) + " is zero");
        const Scalar dj = delta_phi[(i + 1) % 3], dk = delta_phi[(i + 2) % 3];
        out[i] = (dj * dj + dk * dk) / (di * di);
    }
    return out;
}

template <typename Scalar>
struct DifferenceVariances {
    Scalar a{}, b{}, c{};
};

// Variances of the shot-averaged differences of column `method`.
template <typename Scalar>
DifferenceVariances<Scalar> abc_variances(const Population<Scalar>& p, const PureStateResponses<Scalar>& phi,
                                          const NoiseModel<Scalar>& noise, int method = 1) {
    validate_population(p);
    validate_noise(noise);
    const auto d = ordered_differences(phi, column(method).level);
    const Scalar di2 = d[0] * d[0];
    const Scalar rest = d[1] * d[1] + d[2] * d[2];
    const Scalar pg = p(0), pe = p(1), pf = p(2);
    DifferenceVariances<Scalar> v;
    v.a = (Scalar(2) * pe * pf * di2 + (pe + pf) * pg * rest + noise.sigma_a * noise.sigma_a) / noise.shots;
    v.b = (Scalar(2) * pe * pg * di2 + (pe + pg) * pf * rest + noise.sigma_b * noise.sigma_b) / noise.shots;
    v.c = (Scalar(2) * pg * pf * di2 + (pg + pf) * pe * rest + noise.sigma_c * noise.sigma_c) / noise.shots;
    return v;
}

template <typename Scalar>
struct DifferenceRelativeErrors {
    Scalar a{}, b{}, c{};  // |Δa/a|, |Δb/b|, |Δc/c|
};

template <typename Scalar>
DifferenceRelativeErrors<Scalar> abc_relative_errors(const Population<Scalar>& p,
                                                     const PureStateResponses<Scalar>& phi,
                                                     const NoiseModel<Scalar>& noise, int method = 1) {
    using std::sqrt;
    const Scalar pg = p(0), pe = p(1), pf = p(2);
    if (pe == pf) throw DomainError("abc_relative_errors: p_e equals p_f, difference a vanishes");
    if (pg == pe) throw DomainError("abc_relative_errors: p_g equals p_e, difference b vanishes");
    if (pg == pf) throw DomainError("abc_relative_errors: p_g equals p_f, difference c vanishes");
    const auto v = abc_variances(p, phi, noise, method);
    const Scalar di = ordered_differences(phi, column(method).level)[0];
    if (di == Scalar(0)) throw DomainError("abc_relative_errors: column response difference is zero");
    const Scalar a = (pe - pf) * di, b = (pg - pe) * di, c = (pg - pf) * di;
    return {sqrt(v.a) / std::abs(a), sqrt(v.b) / std::abs(b), sqrt(v.c) / std::abs(c)};
}

template <typename Scalar>
struct RatioRelativeErrors {
    Scalar A{}, B{}, C{};
};

// A = b/c, B = a/b, C = a/c with independent differences.
template <typename Scalar>
RatioRelativeErrors<Scalar> ratio_relative_errors(const DifferenceRelativeErrors<Scalar>& r) {
    using std::hypot;
    return {hypot(r.b, r.c), hypot(r.a, r.b), hypot(r.a, r.c)};
}

template <typename Scalar>
struct ComposedError {
    Scalar relative{};  // |ΔC/C|
    Scalar absolute{};  // |ΔC|
};

// C = A·B with independent errors on A and B.
template <typename Scalar>
ComposedError<Scalar> abc_error_composition(Scalar rel_a, Scalar rel_b, Scalar value_a = Scalar(1),
                                            Scalar value_b = Scalar(1)) {
    using std::abs;
    using std::hypot;
    detail::require_non_negative(rel_a, "relative error of A");
    detail::require_non_negative(rel_b, "relative error of B");
    const Scalar rel = hypot(rel_a, rel_b);
    // (ΔC)² = (C/A)²(ΔA)² + (C/B)²(ΔB)²
    const Scalar delta_a = rel_a * abs(value_a), delta_b = rel_b * abs(value_b);
    const Scalar abs_err = hypot(value_b * delta_a, value_a * delta_b);  // C/A = B, C/B = A
    return {rel, abs_err};
}

// |ΔT/T| from the relative error of a ratio; x = ħω_ge/k_B T.
template <typename Scalar>
Scalar temp_error_from_ratio(RatioFamily family, Scalar x, Scalar ratio_relative_error) {
    using std::abs;
    using std::exp;
    using std::expm1;
    detail::require_positive(x, "x");
    const Scalar r = abs(ratio_relative_error);
    switch (family) {
        case RatioFamily::A: return expm1(x) / x * r;
        case RatioFamily::B: return -expm1(-x) / x * r;
        case RatioFamily::C: return r / x;
    }
    return Scalar(0);
}

// Single-shot (ΔT/T)² for a ground state and an N-fold degenerate excited level.
template <typename Scalar>
Scalar qfi_bound_two_level(Scalar x, Scalar degeneracy = Scalar(2)) {
    using std::exp;
    detail::require_positive(x, "x");
    if (!(degeneracy >= Scalar(2))) throw DomainError("qfi_bound_two_level: degeneracy must be at least 2");
    const Scalar m = degeneracy - Scalar(1);
    // (m + eˣ)²/(m x² eˣ) = eˣ(1 + m e^{−x})²/(m x²)
    const Scalar t = Scalar(1) + m * exp(-x);
    return exp(x) * t * t / (m * x * x);
}

// Single-shot (ΔT/T)² for the three lowest transmon levels.
template <typename Scalar>
Scalar qfi_bound_three_level(Scalar x_ge, Scalar x_gf) {
    using std::exp;
    detail::require_positive(x_ge, "x_ge");
    if (!(x_gf > x_ge)) throw DomainError("qfi_bound_three_level: x_gf must exceed x_ge");
    const Scalar t = Scalar(1) + exp(-x_ge) + exp(-x_gf);
    const Scalar s = x_ge + x_gf;
    const Scalar den = x_ge * x_ge + x_gf * x_gf * exp(x_ge - x_gf) + s * s * exp(-x_gf);
    return exp(x_ge) * t * t / den;
}

// Relative temperature error after N shots.
template <typename Scalar>
Scalar averaged_relative_error(Scalar single_shot_squared, Scalar shots) {
    using std::sqrt;
    detail::require_positive(shots, "shots");
    return sqrt(single_shot_squared / shots);
}

// √(ΔT²·t), K/√Hz
template <typename Scalar>
Scalar net(Scalar delta_t, Scalar measurement_time) {
    using std::abs;
    using std::sqrt;
    detail::require_positive(measurement_time, "measurement time");
    detail::require_non_negative(abs(delta_t), "temperature error");
    return abs(delta_t) * sqrt(measurement_time);
}

template <typename Scalar>
struct ErrorReport {
    int method{1};
    DifferenceVariances<Scalar> variances{};
    DifferenceRelativeErrors<Scalar> differences{};
    RatioRelativeErrors<Scalar> ratios{};
    std::array<Scalar, 3> temperature_relative{};  // A, B, C
    std::array<Scalar, 3> net{};                    // A, B, C, K/√Hz; zero without a measurement time
};

template <typename Scalar>
ErrorReport<Scalar> error_report(const Population<Scalar>& p, const PureStateResponses<Scalar>& phi,
                                 const NoiseModel<Scalar>& noise, Scalar temperature, Scalar omega_ge,
                                 int method = 1, Scalar measurement_time = Scalar(0)) {
    ErrorReport<Scalar> rep;
    rep.method = method;
    rep.variances = abc_variances(p, phi, noise, method);
    rep.differences = abc_relative_errors(p, phi, noise, method);
    rep.ratios = ratio_relative_errors(rep.differences);
    const Scalar x = reduced_energy(omega_ge, temperature);
    rep.temperature_relative = {temp_error_from_ratio(RatioFamily::A, x, rep.ratios.A),
                                temp_error_from_ratio(RatioFamily::B, x, rep.ratios.B),
                                temp_error_from_ratio(RatioFamily::C, x, rep.ratios.C)};
    if (measurement_time > Scalar(0)) {
        for (std::size_t i = 0; i < 3; ++i) rep.net[i] = net(rep.temperature_relative[i] * temperature, measurement_time);
    }
    return rep;
}

}  // namespace qthermo
