// fitting.hpp: weighted straight-line fits and the two-regime thermalization analysis

#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace qthermo {

struct FitResult {
    double slope{};
    double offset{};
    double slope_error{};
    double offset_error{};
    double covariance{};  // cov(slope, offset)
    double chi2{};
    std::size_t points{};

    std::size_t dof() const { return points > 2 ? points - 2 : 0; }
};

// y = slope·x + offset by weighted least squares with weights 1/σ².  Parameter
// errors come from the inverse normal matrix and are not rescaled by χ².
FitResult weighted_linear_fit(std::span<const double> xs, std::span<const double> ys,
                              std::span<const double> y_sigmas);

// Unit weights.
FitResult linear_fit(std::span<const double> xs, std::span<const double> ys);

// Single point of a γ₁ / occupation data set.
struct ThermalizationPoint {
    double t_mxc{};          // K
    double t_eff{};          // K
    double t_eff_sigma{};    // K, 0 when unknown
    double gamma1{};         // rad/s
    double gamma1_sigma{};   // rad/s, 0 when unknown
};

struct ThermalizationOptions {
    double omega_ge{};            // rad/s
    double qp_onset_cutoff{0.170};  // K; fit 1 only uses points with T_MXC below it
};

struct ThermalizationFits {
    FitResult gamma1_vs_n;      // γ₁ against n(ω, T_eff)
    FitResult n_eff_vs_n_mxc;   // n(ω, T_eff) against n(ω, T_MXC)
};

ThermalizationFits thermalization_analysis(std::span<const ThermalizationPoint> points,
                                           const ThermalizationOptions& options);

}  // namespace qthermo
