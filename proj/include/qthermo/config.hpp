// config.hpp: run configuration: JSON schema, presets, and conversion to SI
//
// Units at this boundary: GHz (ω/2π), MHz (γ/2π and E/h), mK, ns/μs, μV for Δ/e, kΩ.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qthermo/experiment.hpp"

namespace qthermo {

struct DeviceSpec {
    std::string preset;  // informational once resolved
    double f_ge_ghz{};
    double f_ef_ghz{};
    double gamma1_base_mhz{};
    double ef_rate_factor{2.0};
    double ec_mhz{};
    double gap_uev{kAluminiumGapUeV};
    std::optional<double> ej_mhz;
    double rn_kohm{5.0};
    double zeta_inverse{1e4};

    bool operator==(const DeviceSpec&) const = default;
};

struct BathConfig {
    double gamma1_mhz{};
    std::optional<double> temperature_mk;  // unset follows the swept temperature

    bool operator==(const BathConfig&) const = default;
};

struct RateConfig {
    LifetimeConvention convention{LifetimeConvention::two_pi};
    RateModel model{RateModel::split_total};
    bool quasiparticles{true};

    bool operator==(const RateConfig&) const = default;
};

struct ProtocolSpec {
    double pi_pulse_ns{0};
    double readout_us{0};
    double efficiency_ge{1};
    double efficiency_ef{1};
    ReadoutMode readout_mode{ReadoutMode::time_averaged};
    DelayPlacement delay_placement{DelayPlacement::before_pulse};

    bool operator==(const ProtocolSpec&) const = default;
};

struct ResponseSpec {
    double phi_g{0}, phi_e{1}, phi_f{2};
    bool operator==(const ResponseSpec&) const = default;
};

struct NoiseSpec {
    double sigma_v{0};
    std::uint64_t shots{0};
    double measurement_time_s{29.0};
    bool operator==(const NoiseSpec&) const = default;
};

struct SweepSpec {
    double start_mk{20};
    double stop_mk{300};
    std::uint64_t points{29};
    bool operator==(const SweepSpec&) const = default;
};

struct FisherSpec {
    double shots{131072};
    double degeneracy{10};
    bool operator==(const FisherSpec&) const = default;
};

struct FitSpec {
    std::string estimator{"A2"};
    double qp_cutoff_mk{170};
    bool operator==(const FitSpec&) const = default;
};

enum class OutputFormat { csv, json };

struct OutputSpec {
    std::string path;  // empty writes to stdout
    OutputFormat format{OutputFormat::csv};
    bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
    DeviceSpec device;
    std::vector<BathConfig> baths;
    RateConfig rates;
    ProtocolSpec protocol;
    ResponseSpec responses;
    NoiseSpec noise;
    SweepSpec sweep;
    FisherSpec fisher;
    FitSpec fit;
    OutputSpec output;
    std::uint64_t seed{0};
    unsigned threads{1};

    bool operator==(const RunConfig&) const = default;
};

std::optional<DeviceSpec> device_spec_preset(const std::string& name);
std::vector<std::string> preset_names();

// Throws ConfigError naming the offending field.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig parse_run_config_text(const std::string& text);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

// Non-fatal observations, e.g. a device outside the transmon regime.
std::vector<std::string> config_warnings(const RunConfig& config);

Device resolve_device(const DeviceSpec& spec);
ExperimentConfig to_experiment_config(const RunConfig& config);
ThermalizationOptions to_thermalization_options(const RunConfig& config);
RatioKind parse_ratio_kind(const std::string& name);

}  // namespace qthermo
