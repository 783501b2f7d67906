// experiment.hpp: synthetic thermometry runs: temperature sweeps, shot-noise Monte
// Carlo, pulse-efficiency error maps and the bridge to the thermalization fits.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qthermo/device.hpp"
#include "qthermo/error_analysis.hpp"
#include "qthermo/fitting.hpp"
#include "qthermo/population_dynamics.hpp"
#include "qthermo/protocol.hpp"
#include "qthermo/rng.hpp"
#include "qthermo/thermometry.hpp"

namespace qthermo {

// One relaxation channel coupled to the qubit.  A bath without a temperature
// follows the swept (mixing-chamber) temperature.
struct BathEntry {
    double gamma1{};                    // rad/s, ge transition
    std::optional<double> temperature;  // K
};

struct NoiseSettings {
    double sigma_v{0};             // readout noise per shot, readout units
    std::uint64_t shots{0};        // shots per sequence; 0 gives noiseless outcomes
    double measurement_time{29.0}; // s, for NET
};

struct ExperimentConfig {
    DeviceParams<double> qubit;
    JunctionParams<double> junction;
    std::vector<BathEntry> baths;
    bool quasiparticles{true};
    RateOptions<double> rate_options;
    ProtocolConfig<double> protocol;
    PureStateResponses<double> responses;
    NoiseSettings noise;
    unsigned threads{1};
};

std::vector<BathEntry> default_baths(const DeviceParams<double>& qubit);

void validate(const ExperimentConfig& config);

// Rates at mixing-chamber temperature `t_mxc`, quasiparticles at the same temperature.
RateSet<double> experiment_rates(const ExperimentConfig& config, double t_mxc);

// Total ge relaxation rate γ₁ = (Γ↑ + Γ↓)·factor, rad/s.
double total_gamma1(const RateSet<double>& rates, LifetimeConvention convention);

struct McOutcomes {
    OutcomeSextuple<double> means;
    OutcomeSextuple<double> variances;  // unbiased per-shot sample variances
};

// Per shot: draw a level from the sequence's readout population and report
// φ_level plus Gaussian noise.
McOutcomes mc_outcomes(const std::array<Population<double>, 6>& sequence_populations,
                       const PureStateResponses<double>& phi, double sigma_v, std::uint64_t shots,
                       std::uint64_t seed);

// Instantaneous perfect pulses applied to p.
McOutcomes mc_outcomes(const Population<double>& p, const PureStateResponses<double>& phi, double sigma_v,
                       std::uint64_t shots, std::uint64_t seed);

std::array<Population<double>, 6> readout_populations(const Population<double>& p0, const RateSet<double>& rates,
                                                      const ProtocolConfig<double>& protocol);

struct SweepRecord {
    double t_set{};
    RateSet<double> rates;
    double gamma1{};                     // rad/s
    Population<double> initial = Population<double>::Zero();
    OutcomeSextuple<double> outcomes;
    std::optional<OutcomeSextuple<double>> outcome_variances;
    EstimateReport<double> estimates;
    std::array<std::optional<ErrorReport<double>>, 3> errors;  // per column
    std::uint64_t seed{};
    std::string failure;                 // non-empty when the point could not be evaluated
};

SweepRecord sweep_point(const ExperimentConfig& config, double t_set, std::uint64_t seed);

// Points are independent; record i uses the substream (seed, i) so the result does
// not depend on the thread count.
std::vector<SweepRecord> sweep(std::span<const double> temperatures, const ExperimentConfig& config,
                               std::uint64_t seed);

std::vector<double> linear_grid(double start, double stop, std::size_t points);

// ⟨(T_δ(α) − T_1(α))/T_1(α)⟩ over the estimators valid in both runs.  Rows follow
// δ_ge, columns δ_ef.
Eigen::MatrixXd efficiency_error_surface(double temperature, std::span<const double> delta_ge,
                                         std::span<const double> delta_ef, const ExperimentConfig& config);

double averaged_relative_error(const EstimateReport<double>& subject, const EstimateReport<double>& reference);

// Thermalization data from sweep records using estimator `kind`.
std::vector<ThermalizationPoint> thermalization_points(std::span<const SweepRecord> records, RatioKind kind);

}  // namespace qthermo
