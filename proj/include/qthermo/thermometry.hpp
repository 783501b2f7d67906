// thermometry.hpp: the nine population-ratio estimators, their closed forms and
// the inversion from a ratio back to an effective temperature.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "qthermo/constants.hpp"
#include "qthermo/device.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/protocol.hpp"

namespace qthermo {

enum class RatioFamily { A, B, C };
enum class Level { g, e, f };

struct RatioKind {
    RatioFamily family{RatioFamily::A};
    int method{1};  // column 1..3

    std::string name() const {
        constexpr const char* letters = "ABC";
        return std::string(1, letters[static_cast<int>(family)]) + std::to_string(method);
    }
    friend bool operator==(const RatioKind&, const RatioKind&) = default;
};

inline constexpr std::array<RatioKind, 9> kAllRatios{{
    {RatioFamily::A, 1}, {RatioFamily::A, 2}, {RatioFamily::A, 3},
    {RatioFamily::B, 1}, {RatioFamily::B, 2}, {RatioFamily::B, 3},
    {RatioFamily::C, 1}, {RatioFamily::C, 2}, {RatioFamily::C, 3},
}};

struct OutcomeDifference {
    SequenceLabel plus;
    SequenceLabel minus;
};

// Each column measures a = (p_e−p_f)Δφ, b = (p_g−p_e)Δφ, c = (p_g−p_f)Δφ up to a
// common sign, with Δφ the response difference of `level`.  A = b/c, B = a/b, C = a/c.
struct ColumnMap {
    OutcomeDifference a, b, c;
    Level level;
};

inline constexpr std::array<ColumnMap, 3> kColumns{{
    {{SequenceLabel::x2, SequenceLabel::y2}, {SequenceLabel::x0, SequenceLabel::x1},
     {SequenceLabel::y0, SequenceLabel::y1}, Level::f},
    {{SequenceLabel::x1, SequenceLabel::y1}, {SequenceLabel::y0, SequenceLabel::x2},
     {SequenceLabel::x0, SequenceLabel::y2}, Level::e},
    {{SequenceLabel::x0, SequenceLabel::y0}, {SequenceLabel::y1, SequenceLabel::y2},
     {SequenceLabel::x1, SequenceLabel::x2}, Level::g},
}};

inline const ColumnMap& column(int method) {
    if (method < 1 || method > 3) throw DomainError("ratio method must be 1, 2 or 3");
    return kColumns[static_cast<std::size_t>(method - 1)];
}

enum class EstimateStatus { ok, out_of_range, non_monotone_input };

inline const char* status_name(EstimateStatus s) {
    switch (s) {
        case EstimateStatus::ok: return "ok";
        case EstimateStatus::out_of_range: return "out_of_range";
        case EstimateStatus::non_monotone_input: return "non_monotone_input";
    }
    return "?";
}

template <typename Scalar>
struct RatioValue {
    Scalar value{std::numeric_limits<Scalar>::quiet_NaN()};
    EstimateStatus status{EstimateStatus::ok};
};

template <typename Scalar>
Scalar difference(const OutcomeSextuple<Scalar>& o, OutcomeDifference d) {
    return o[d.plus] - o[d.minus];
}

template <typename Scalar>
Scalar outcome_scale(const OutcomeSextuple<Scalar>& o) {
    return o.vector().cwiseAbs().maxCoeff();
}

// Quotient for one estimator; a denominator below `relative_floor` times the outcome
// scale is reported as out_of_range.
template <typename Scalar>
RatioValue<Scalar> ratio_from_outcomes(RatioKind kind, const OutcomeSextuple<Scalar>& o,
                                       Scalar relative_floor = Scalar(1e-12)) {
    using std::abs;
    using std::isfinite;
    const ColumnMap& col = column(kind.method);
    const Scalar a = difference(o, col.a);
    const Scalar b = difference(o, col.b);
    const Scalar c = difference(o, col.c);
    Scalar num{}, den{};
    switch (kind.family) {
        case RatioFamily::A: num = b, den = c; break;
        case RatioFamily::B: num = a, den = b; break;
        case RatioFamily::C: num = a, den = c; break;
    }
    RatioValue<Scalar> r;
    const Scalar scale = outcome_scale(o);
    if (!isfinite(num) || !isfinite(den) || abs(den) <= relative_floor * scale || scale == Scalar(0)) {
        r.status = EstimateStatus::out_of_range;
        return r;
    }
    r.value = num / den;
    return r;
}

// e^{−ħω/kT} with its complement computed without cancellation.
namespace detail {

template <typename Scalar>
struct BoltzmannFactors {
    Scalar ge, gf;            // e^{−x_ge}, e^{−x_gf}
    Scalar one_minus_ge;      // 1 − e^{−x_ge}
    Scalar one_minus_gf;
};

template <typename Scalar>
BoltzmannFactors<Scalar> boltzmann_factors(Scalar temperature, Scalar omega_ge, Scalar omega_gf) {
    using std::exp;
    using std::expm1;
    detail::require_positive(temperature, "temperature");
    detail::require_positive(omega_ge, "omega_ge");
    if (!(omega_gf > omega_ge)) throw DomainError("omega_gf must exceed omega_ge");
    const Scalar beta = Constants<Scalar>::hbar / (Constants<Scalar>::k_B * temperature);
    return {exp(-beta * omega_ge), exp(-beta * omega_gf), -expm1(-beta * omega_ge), -expm1(-beta * omega_gf)};
}

}  // namespace detail

template <typename Scalar>
Scalar ratio_closed_form(RatioFamily family, Scalar temperature, Scalar omega_ge, Scalar omega_gf) {
    const auto f = detail::boltzmann_factors(temperature, omega_ge, omega_gf);
    switch (family) {
        case RatioFamily::A: return f.one_minus_ge / f.one_minus_gf;
        case RatioFamily::B: return (f.ge - f.gf) / f.one_minus_ge;
        case RatioFamily::C: return (f.ge - f.gf) / f.one_minus_gf;
    }
    return Scalar(0);
}

// Population form of the ideal ratio.
template <typename Scalar>
Scalar ratio_from_populations(RatioFamily family, const Population<Scalar>& p) {
    switch (family) {
        case RatioFamily::A: return (p(0) - p(1)) / (p(0) - p(2));
        case RatioFamily::B: return (p(1) - p(2)) / (p(0) - p(1));
        case RatioFamily::C: return (p(1) - p(2)) / (p(0) - p(2));
    }
    return Scalar(0);
}

template <typename Scalar>
Scalar low_T_approximation(RatioFamily family, Scalar temperature, Scalar omega_ge) {
    using std::exp;
    const Scalar x = reduced_energy(omega_ge, temperature);
    return family == RatioFamily::A ? Scalar(1) - exp(-x) : exp(-x);
}

// Open interval of values a family can take for T in (0, ∞).
template <typename Scalar>
std::pair<Scalar, Scalar> attainable_range(RatioFamily family, Scalar omega_ge, Scalar omega_gf) {
    const Scalar r = omega_ge / omega_gf;
    switch (family) {
        case RatioFamily::A: return {r, Scalar(1)};
        case RatioFamily::B: return {Scalar(0), (omega_gf - omega_ge) / omega_ge};
        case RatioFamily::C: return {Scalar(0), Scalar(1) - r};
    }
    return {Scalar(0), Scalar(0)};
}

inline constexpr double kInversionLowerK = 1e-4;
inline constexpr double kInversionUpperK = 10.0;
inline constexpr int kInversionMaxIterations = 80;

template <typename Scalar>
struct TemperatureEstimate {
    Scalar temperature{std::numeric_limits<Scalar>::quiet_NaN()};
    EstimateStatus status{EstimateStatus::ok};
};

// Bisection in log T over [0.1 mK, 10 K].
template <typename Scalar>
TemperatureEstimate<Scalar> invert_ratio(RatioFamily family, Scalar value, Scalar omega_ge, Scalar omega_gf) {
    using std::abs;
    using std::exp;
    using std::isfinite;
    using std::log;
    using std::sqrt;
    TemperatureEstimate<Scalar> est;
    const auto [lo_v, hi_v] = attainable_range(family, omega_ge, omega_gf);
    if (!isfinite(value) || !(value > lo_v) || !(value < hi_v)) {
        est.status = EstimateStatus::out_of_range;
        return est;
    }
    const bool increasing = family != RatioFamily::A;
    auto residual = [&](Scalar t) {
        const Scalar r = ratio_closed_form(family, t, omega_ge, omega_gf) - value;
        return increasing ? r : -r;
    };
    Scalar lo = Scalar(kInversionLowerK), hi = Scalar(kInversionUpperK);
    const Scalar r_lo = residual(lo), r_hi = residual(hi);
    if (r_lo > Scalar(0) || r_hi < Scalar(0)) {
        est.status = EstimateStatus::out_of_range;
        return est;
    }
    for (int i = 0; i < kInversionMaxIterations; ++i) {
        const Scalar mid = sqrt(lo * hi);
        const Scalar r = residual(mid);
        if (r == Scalar(0)) {
            lo = hi = mid;
            break;
        }
        (r < Scalar(0) ? lo : hi) = mid;
    }
    est.temperature = sqrt(lo * hi);
    return est;
}

template <typename Scalar>
struct EstimateReport {
    std::array<RatioValue<Scalar>, 9> ratios{};
    std::array<TemperatureEstimate<Scalar>, 9> temperatures{};

    int ok_count() const {
        int n = 0;
        for (const auto& t : temperatures) n += t.status == EstimateStatus::ok;
        return n;
    }
    // (max − min)/mean over the estimators that succeeded
    Scalar relative_spread() const {
        Scalar lo = std::numeric_limits<Scalar>::infinity(), hi = -lo, sum{0};
        int n = 0;
        for (const auto& t : temperatures) {
            if (t.status != EstimateStatus::ok) continue;
            lo = std::min(lo, t.temperature);
            hi = std::max(hi, t.temperature);
            sum += t.temperature;
            ++n;
        }
        if (n < 2) return std::numeric_limits<Scalar>::quiet_NaN();
        return (hi - lo) / (sum / Scalar(n));
    }
};

// Flags a sextuple whose differences contradict p_g > p_e > p_f in every column.
template <typename Scalar>
bool sextuple_is_monotone(const OutcomeSextuple<Scalar>& o) {
    for (const auto& col : kColumns) {
        const Scalar a = difference(o, col.a), b = difference(o, col.b), c = difference(o, col.c);
        // a, b, c share the sign of Δφ; |c| = |a| + |b| for ordered populations
        if ((a > Scalar(0)) != (c > Scalar(0)) || (b > Scalar(0)) != (c > Scalar(0))) return false;
    }
    return true;
}

template <typename Scalar>
EstimateReport<Scalar> full_report(const OutcomeSextuple<Scalar>& o, const DeviceParams<Scalar>& qubit,
                                   Scalar relative_floor = Scalar(1e-12)) {
    EstimateReport<Scalar> rep;
    const bool monotone = sextuple_is_monotone(o);
    for (std::size_t i = 0; i < kAllRatios.size(); ++i) {
        const RatioKind kind = kAllRatios[i];
        rep.ratios[i] = ratio_from_outcomes(kind, o, relative_floor);
        if (rep.ratios[i].status != EstimateStatus::ok) {
            rep.temperatures[i].status = rep.ratios[i].status;
            continue;
        }
        rep.temperatures[i] = invert_ratio(kind.family, rep.ratios[i].value, qubit.omega_ge, qubit.omega_gf());
        if (rep.temperatures[i].status != EstimateStatus::ok && !monotone) {
            rep.temperatures[i].status = EstimateStatus::non_monotone_input;
        }
    }
    return rep;
}

}  // namespace qthermo
