// device.hpp: transmon and junction parameters, with presets for the measured devices

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "qthermo/constants.hpp"

namespace qthermo {

template <typename Scalar>
struct DeviceParams {
    Scalar omega_ge{};          // rad/s
    Scalar omega_ef{};          // rad/s
    Scalar gamma1_base{};       // γ₁⁰ of the g–e transition at base temperature, rad/s
    Scalar ef_rate_factor{2};   // Γ^ef/Γ^ge; τ₁^ef = τ₁^ge/2 for a transmon

    Scalar omega_gf() const { return omega_ge + omega_ef; }
    // α/ħ, negative for a transmon
    Scalar anharmonicity() const { return omega_ef - omega_ge; }
};

template <typename Scalar>
struct JunctionParams {
    Scalar gap{};                              // Δ, J
    Scalar charging_energy{};                  // E_c, J
    std::optional<Scalar> josephson_energy{};  // E_J, J; derived from ω_ge and E_c when unset
    Scalar normal_resistance{5.0e3};           // R_n, Ω
    Scalar subgap_transparency_inverse{1e4};   // ζ⁻¹
};

struct Device {
    std::string name;
    DeviceParams<double> qubit;
    JunctionParams<double> junction;
};

struct DevicePresetRow {
    std::string_view name;
    double f_ge_ghz;
    double f_ef_ghz;
    double ec_mhz;
    double gamma1_base_mhz;  // γ₁⁰/2π
};

// Spectroscopy values and base-temperature relaxation rates of the four chips.
// R3-II has no published γ₁⁰; it uses the median of the other three.
inline constexpr std::array<DevicePresetRow, 4> kDevicePresets{{
    {"R2-I", 6.422, 6.221, 201.0, 0.41},
    {"R4-I", 6.649, 6.417, 232.0, 0.19},
    {"R3-II", 6.732, 6.513, 219.0, 0.37},
    {"Q2-III", 7.042, 6.835, 207.0, 0.37},
}};

inline constexpr double kAluminiumGapUeV = 180.0;

inline std::optional<Device> device_preset(std::string_view name) {
    for (const auto& row : kDevicePresets) {
        if (row.name != name) continue;
        Device d;
        d.name = std::string(row.name);
        d.qubit.omega_ge = units::omega_from_ghz(row.f_ge_ghz);
        d.qubit.omega_ef = units::omega_from_ghz(row.f_ef_ghz);
        d.qubit.gamma1_base = units::omega_from_mhz(row.gamma1_base_mhz);
        d.junction.gap = units::joule_from_uev(kAluminiumGapUeV);
        d.junction.charging_energy = units::joule_from_mhz_h(row.ec_mhz);
        return d;
    }
    return std::nullopt;
}

}  // namespace qthermo
