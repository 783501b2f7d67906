// protocol.hpp: the six pulse sequences, simulated readout outcomes, and the inverse
// problem recovering populations from an outcome sextuple.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "qthermo/errors.hpp"
#include "qthermo/population_dynamics.hpp"

namespace qthermo {

template <typename Scalar>
struct PureStateResponses {
    Scalar phi_g{0};
    Scalar phi_e{1};
    Scalar phi_f{2};

    Population<Scalar> vector() const { return Population<Scalar>(phi_g, phi_e, phi_f); }
    // Δφ_g = φ_e − φ_f, Δφ_e = φ_f − φ_g, Δφ_f = φ_g − φ_e
    Scalar delta_g() const { return phi_e - phi_f; }
    Scalar delta_e() const { return phi_f - phi_g; }
    Scalar delta_f() const { return phi_g - phi_e; }
};

template <typename Scalar>
void validate_responses(const PureStateResponses<Scalar>& phi) {
    using std::isfinite;
    if (!isfinite(phi.phi_g) || !isfinite(phi.phi_e) || !isfinite(phi.phi_f)) {
        throw DomainError("pure state responses must be finite");
    }
}

enum class SequenceLabel { x0, x1, x2, y0, y1, y2 };

inline constexpr std::array<SequenceLabel, 6> kSequenceLabels{SequenceLabel::x0, SequenceLabel::x1,
                                                             SequenceLabel::x2, SequenceLabel::y0,
                                                             SequenceLabel::y1, SequenceLabel::y2};

inline constexpr std::string_view sequence_name(SequenceLabel s) {
    constexpr std::array<std::string_view, 6> names{"x0", "x1", "x2", "y0", "y1", "y2"};
    return names[static_cast<int>(s)];
}

inline std::vector<PulseKind> pulse_sequence(SequenceLabel s) {
    using enum PulseKind;
    switch (s) {
        case SequenceLabel::x0: return {};
        case SequenceLabel::x1: return {ge};
        case SequenceLabel::x2: return {ge, ef};
        case SequenceLabel::y0: return {ef};
        case SequenceLabel::y1: return {ef, ge};
        case SequenceLabel::y2: return {ef, ge, ef};
    }
    return {};
}

template <typename Scalar>
struct OutcomeSextuple {
    Scalar x0{}, x1{}, x2{}, y0{}, y1{}, y2{};

    Scalar& operator[](SequenceLabel s) {
        switch (s) {
            case SequenceLabel::x0: return x0;
            case SequenceLabel::x1: return x1;
            case SequenceLabel::x2: return x2;
            case SequenceLabel::y0: return y0;
            case SequenceLabel::y1: return y1;
            case SequenceLabel::y2: return y2;
        }
        return x0;
    }
    const Scalar& operator[](SequenceLabel s) const { return const_cast<OutcomeSextuple&>(*this)[s]; }

    Eigen::Matrix<Scalar, 6, 1> vector() const {
        Eigen::Matrix<Scalar, 6, 1> v;
        v << x0, x1, x2, y0, y1, y2;
        return v;
    }
    static OutcomeSextuple from_vector(const Eigen::Matrix<Scalar, 6, 1>& v) {
        return {v(0), v(1), v(2), v(3), v(4), v(5)};
    }
};

enum class ReadoutMode { time_averaged, initial_value };
// Where the Δt_π free evolution sits relative to each instantaneous pulse.
enum class DelayPlacement { before_pulse, after_pulse };

template <typename Scalar>
struct ProtocolConfig {
    Scalar pi_pulse_duration{0};  // Δt_π, s
    Scalar readout_duration{0};   // Δt_RO, s
    Scalar efficiency_ge{1};
    Scalar efficiency_ef{1};
    ReadoutMode readout_mode{ReadoutMode::time_averaged};
    DelayPlacement delay_placement{DelayPlacement::before_pulse};
};

template <typename Scalar>
void validate_protocol(const ProtocolConfig<Scalar>& cfg) {
    detail::require_non_negative(cfg.pi_pulse_duration, "pi pulse duration");
    detail::require_non_negative(cfg.readout_duration, "readout duration");
    for (Scalar d : {cfg.efficiency_ge, cfg.efficiency_ef}) {
        if (!(d >= Scalar(0) && d <= Scalar(1))) throw DomainError("pulse efficiency must lie in [0, 1]");
    }
}

// Permutation of (p_g, p_e, p_f) produced by a perfect sequence.
template <typename Scalar>
Population<Scalar> ideal_sequence_population(const Population<Scalar>& p, SequenceLabel s) {
    Population<Scalar> q = p;
    for (PulseKind k : pulse_sequence(s)) q = apply_pulse(q, k, Scalar(1));
    return q;
}

template <typename Scalar>
OutcomeSextuple<Scalar> ideal_outcomes(const Population<Scalar>& p, const PureStateResponses<Scalar>& phi) {
    const Population<Scalar> v = phi.vector();
    OutcomeSextuple<Scalar> o;
    for (auto s : kSequenceLabels) o[s] = ideal_sequence_population(p, s).dot(v);
    return o;
}

// Population right after the last pulse of the sequence.
template <typename Scalar>
Population<Scalar> prepared_population(SequenceLabel seq, const Population<Scalar>& p0, const RateSet<Scalar>& rates,
                                       const ProtocolConfig<Scalar>& cfg) {
    const auto pulses = pulse_sequence(seq);
    Population<Scalar> p = p0;
    for (std::size_t i = 0; i < pulses.size(); ++i) {
        const Scalar delta = pulses[i] == PulseKind::ge ? cfg.efficiency_ge : cfg.efficiency_ef;
        const bool before = cfg.delay_placement == DelayPlacement::before_pulse;
        if (before && i > 0 && cfg.pi_pulse_duration > Scalar(0)) p = evolve_analytic(p, rates, cfg.pi_pulse_duration);
        p = apply_pulse(p, pulses[i], delta);
        if (!before && i + 1 < pulses.size() && cfg.pi_pulse_duration > Scalar(0)) {
            p = evolve_analytic(p, rates, cfg.pi_pulse_duration);
        }
    }
    return p;
}

// Population weighting the readout: the mean over Δt_RO or the value at its start.
template <typename Scalar>
Population<Scalar> readout_population(SequenceLabel seq, const Population<Scalar>& p0, const RateSet<Scalar>& rates,
                                      const ProtocolConfig<Scalar>& cfg) {
    validate_protocol(cfg);
    const Population<Scalar> p = prepared_population(seq, p0, rates, cfg);
    if (cfg.readout_mode == ReadoutMode::initial_value) return p;
    return time_averaged(p, rates, cfg.readout_duration);
}

template <typename Scalar>
Scalar simulate_outcome(SequenceLabel seq, const Population<Scalar>& p0, const RateSet<Scalar>& rates,
                        const PureStateResponses<Scalar>& phi, const ProtocolConfig<Scalar>& cfg) {
    validate_responses(phi);
    return readout_population(seq, p0, rates, cfg).dot(phi.vector());
}

template <typename Scalar>
OutcomeSextuple<Scalar> simulate_protocol(const Population<Scalar>& p0, const RateSet<Scalar>& rates,
                                          const PureStateResponses<Scalar>& phi, const ProtocolConfig<Scalar>& cfg) {
    OutcomeSextuple<Scalar> o;
    for (auto s : kSequenceLabels) o[s] = simulate_outcome(s, p0, rates, phi, cfg);
    return o;
}

template <typename Scalar>
struct PopulationFit {
    Population<Scalar> p = Population<Scalar>::Zero();
    Scalar residual{};        // ‖D p − o‖₂
    bool large_residual{};    // residual above tolerance, typically decay during readout
};

// Constrained least squares: min ‖D p − o‖ subject to Σp = 1.
template <typename Scalar>
PopulationFit<Scalar> populations_from_outcomes(const OutcomeSextuple<Scalar>& o, const PureStateResponses<Scalar>& phi,
                                                Scalar residual_tolerance = Scalar(1e-6)) {
    using std::abs;
    validate_responses(phi);
    const Scalar scale = std::max({abs(phi.phi_g), abs(phi.phi_e), abs(phi.phi_f), Scalar(1)});
    const Scalar tol = Scalar(1e-9) * scale;
    if (abs(phi.phi_g - phi.phi_e) < tol || abs(phi.phi_e - phi.phi_f) < tol || abs(phi.phi_g - phi.phi_f) < tol) {
        throw DomainError("populations_from_outcomes: pure state responses are not distinguishable");
    }
    Eigen::Matrix<Scalar, 6, 3> D;
    for (int i = 0; i < 3; ++i) {
        Population<Scalar> unit = Population<Scalar>::Zero();
        unit(i) = Scalar(1);
        const auto col = ideal_outcomes(unit, phi).vector();
        D.col(i) = col;
    }
    // KKT system [2DᵀD 1; 1ᵀ 0][p; λ] = [2Dᵀo; 1]
    Eigen::Matrix<Scalar, 4, 4> K = Eigen::Matrix<Scalar, 4, 4>::Zero();
    K.template topLeftCorner<3, 3>() = Scalar(2) * D.transpose() * D;
    K.template block<3, 1>(0, 3).setOnes();
    K.template block<1, 3>(3, 0).setOnes();
    Eigen::Matrix<Scalar, 4, 1> rhs;
    rhs.template head<3>() = Scalar(2) * D.transpose() * o.vector();
    rhs(3) = Scalar(1);
    const Eigen::Matrix<Scalar, 4, 1> sol = K.fullPivLu().solve(rhs);

    PopulationFit<Scalar> fit;
    fit.p = sol.template head<3>();
    fit.residual = (D * fit.p - o.vector()).norm();
    fit.large_residual = fit.residual > residual_tolerance * scale;
    return fit;
}

}  // namespace qthermo
