#include "qthermo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qthermo/errors.hpp"
#include "qthermo/quasiparticle.hpp"

namespace qthermo {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config: " + path + ": " + msg);
}

class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    bool has(const char* key) const { return j_.contains(key); }

    template <typename T>
    void optional(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        read(j_.at(key), sub(key), out);
    }

    template <typename T>
    void required(const char* key, T& out) {
        if (!j_.contains(key)) fail(sub(key), "missing required field");
        optional(key, out);
    }

    void mark(const char* key) { seen_.insert(key); }

    const json& child(const char* key) {
        seen_.insert(key);
        return j_.at(key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) fail(sub(it.key().c_str()), "unknown key");
        }
    }

    std::string sub(const char* key) const { return path_.empty() ? std::string(key) : path_ + "." + key; }

private:
    static void read(const json& v, const std::string& path, double& out) {
        if (!v.is_number()) fail(path, "expected a number");
        out = v.get<double>();
        if (!std::isfinite(out)) fail(path, "must be finite");
    }
    static void read(const json& v, const std::string& path, std::optional<double>& out) {
        if (v.is_null()) {
            out.reset();
            return;
        }
        double d{};
        read(v, path, d);
        out = d;
    }
    static void read(const json& v, const std::string& path, std::uint64_t& out) {
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            fail(path, "expected a non-negative integer");
        }
        out = v.get<std::uint64_t>();
    }
    static void read(const json& v, const std::string& path, unsigned& out) {
        std::uint64_t u{};
        read(v, path, u);
        if (u > 4096) fail(path, "too large");
        out = static_cast<unsigned>(u);
    }
    static void read(const json& v, const std::string& path, bool& out) {
        if (!v.is_boolean()) fail(path, "expected true or false");
        out = v.get<bool>();
    }
    static void read(const json& v, const std::string& path, std::string& out) {
        if (!v.is_string()) fail(path, "expected a string");
        out = v.get<std::string>();
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename E>
struct EnumName {
    E value;
    const char* name;
};

constexpr EnumName<LifetimeConvention> kConventions[] = {{LifetimeConvention::two_pi, "two_pi"},
                                                         {LifetimeConvention::unit, "unit"}};
constexpr EnumName<RateModel> kModels[] = {{RateModel::split_total, "split_total"}, {RateModel::bath, "bath"}};
constexpr EnumName<ReadoutMode> kReadoutModes[] = {{ReadoutMode::time_averaged, "time_averaged"},
                                                   {ReadoutMode::initial_value, "initial_value"}};
constexpr EnumName<DelayPlacement> kPlacements[] = {{DelayPlacement::before_pulse, "before_pulse"},
                                                    {DelayPlacement::after_pulse, "after_pulse"}};
constexpr EnumName<OutputFormat> kFormats[] = {{OutputFormat::csv, "csv"}, {OutputFormat::json, "json"}};

template <typename E, std::size_t N>
E enum_from(const std::string& s, const EnumName<E> (&table)[N], const std::string& path) {
    std::string allowed;
    for (const auto& e : table) {
        if (s == e.name) return e.value;
        allowed += allowed.empty() ? e.name : std::string(", ") + e.name;
    }
    fail(path, "unknown value '" + s + "' (expected one of " + allowed + ")");
}

template <typename E, std::size_t N>
const char* enum_name(E v, const EnumName<E> (&table)[N]) {
    for (const auto& e : table) {
        if (e.value == v) return e.name;
    }
    return "?";
}

template <typename E, std::size_t N>
void optional_enum(ObjectReader& r, const char* key, E& out, const EnumName<E> (&table)[N]) {
    r.mark(key);
    if (!r.has(key)) return;
    std::string s;
    r.optional(key, s);
    out = enum_from(s, table, r.sub(key));
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& row : kDevicePresets) names.emplace_back(row.name);
    return names;
}

std::optional<DeviceSpec> device_spec_preset(const std::string& name) {
    for (const auto& row : kDevicePresets) {
        if (row.name != name) continue;
        DeviceSpec d;
        d.preset = std::string(row.name);
        d.f_ge_ghz = row.f_ge_ghz;
        d.f_ef_ghz = row.f_ef_ghz;
        d.gamma1_base_mhz = row.gamma1_base_mhz;
        d.ec_mhz = row.ec_mhz;
        return d;
    }
    return std::nullopt;
}

namespace {

DeviceSpec parse_device(const json& j) {
    ObjectReader r(j, "device");
    DeviceSpec d;
    std::string preset;
    r.optional("preset", preset);
    if (!preset.empty()) {
        auto p = device_spec_preset(preset);
        if (!p) {
            std::string names;
            for (const auto& n : preset_names()) names += (names.empty() ? "" : ", ") + n;
            fail("device.preset", "unknown preset '" + preset + "' (known: " + names + ")");
        }
        d = *p;
        r.optional("f_ge_ghz", d.f_ge_ghz);
        r.optional("f_ef_ghz", d.f_ef_ghz);
        r.optional("gamma1_base_mhz", d.gamma1_base_mhz);
        r.optional("ec_mhz", d.ec_mhz);
    } else {
        r.required("f_ge_ghz", d.f_ge_ghz);
        r.required("f_ef_ghz", d.f_ef_ghz);
        r.required("gamma1_base_mhz", d.gamma1_base_mhz);
        r.required("ec_mhz", d.ec_mhz);
    }
    r.optional("ef_rate_factor", d.ef_rate_factor);
    r.optional("gap_uev", d.gap_uev);
    r.optional("ej_mhz", d.ej_mhz);
    r.optional("rn_kohm", d.rn_kohm);
    r.optional("zeta_inverse", d.zeta_inverse);
    r.finish();

    auto positive = [](double v, const char* field) {
        if (!(v > 0)) fail(std::string("device.") + field, "must be positive");
    };
    positive(d.f_ge_ghz, "f_ge_ghz");
    positive(d.f_ef_ghz, "f_ef_ghz");
    positive(d.gamma1_base_mhz, "gamma1_base_mhz");
    positive(d.ef_rate_factor, "ef_rate_factor");
    positive(d.ec_mhz, "ec_mhz");
    positive(d.gap_uev, "gap_uev");
    positive(d.rn_kohm, "rn_kohm");
    positive(d.zeta_inverse, "zeta_inverse");
    if (d.ej_mhz) positive(*d.ej_mhz, "ej_mhz");
    return d;
}

std::vector<BathConfig> parse_baths(const json& j) {
    if (!j.is_array()) fail("baths", "expected an array");
    if (j.empty()) fail("baths", "bath list is empty");
    std::vector<BathConfig> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string path = "baths[" + std::to_string(i) + "]";
        ObjectReader r(j[i], path);
        BathConfig b;
        r.required("gamma1_mhz", b.gamma1_mhz);
        r.optional("temperature_mk", b.temperature_mk);
        r.finish();
        if (!(b.gamma1_mhz >= 0)) fail(path + ".gamma1_mhz", "must be non-negative");
        if (b.temperature_mk && !(*b.temperature_mk > 0)) fail(path + ".temperature_mk", "must be positive");
        out.push_back(b);
    }
    return out;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    ObjectReader root(j, "");
    RunConfig c;
    if (root.has("device")) {
        c.device = parse_device(root.child("device"));
    } else {
        fail("device", "missing (give a preset name or explicit parameters)");
    }
    if (root.has("baths")) {
        c.baths = parse_baths(root.child("baths"));
    } else {
        c.baths = {BathConfig{c.device.gamma1_base_mhz, std::nullopt}};
    }
    if (root.has("rates")) {
        ObjectReader r(root.child("rates"), "rates");
        optional_enum(r, "convention", c.rates.convention, kConventions);
        optional_enum(r, "model", c.rates.model, kModels);
        r.optional("quasiparticles", c.rates.quasiparticles);
        r.finish();
    }
    if (root.has("protocol")) {
        ObjectReader r(root.child("protocol"), "protocol");
        r.optional("pi_pulse_ns", c.protocol.pi_pulse_ns);
        r.optional("readout_us", c.protocol.readout_us);
        r.optional("efficiency_ge", c.protocol.efficiency_ge);
        r.optional("efficiency_ef", c.protocol.efficiency_ef);
        optional_enum(r, "readout_mode", c.protocol.readout_mode, kReadoutModes);
        optional_enum(r, "delay_placement", c.protocol.delay_placement, kPlacements);
        r.finish();
        if (c.protocol.pi_pulse_ns < 0) fail("protocol.pi_pulse_ns", "must be non-negative");
        if (c.protocol.readout_us < 0) fail("protocol.readout_us", "must be non-negative");
        for (auto [v, name] : {std::pair{c.protocol.efficiency_ge, "efficiency_ge"},
                               std::pair{c.protocol.efficiency_ef, "efficiency_ef"}}) {
            if (!(v >= 0 && v <= 1)) fail(std::string("protocol.") + name, "must lie in [0, 1]");
        }
    }
    if (root.has("responses")) {
        ObjectReader r(root.child("responses"), "responses");
        r.optional("phi_g", c.responses.phi_g);
        r.optional("phi_e", c.responses.phi_e);
        r.optional("phi_f", c.responses.phi_f);
        r.finish();
    }
    if (root.has("noise")) {
        ObjectReader r(root.child("noise"), "noise");
        r.optional("sigma_v", c.noise.sigma_v);
        r.optional("shots", c.noise.shots);
        r.optional("measurement_time_s", c.noise.measurement_time_s);
        r.finish();
        if (c.noise.sigma_v < 0) fail("noise.sigma_v", "must be non-negative");
        if (!(c.noise.measurement_time_s > 0)) fail("noise.measurement_time_s", "must be positive");
    }
    if (root.has("sweep")) {
        ObjectReader r(root.child("sweep"), "sweep");
        r.optional("start_mk", c.sweep.start_mk);
        r.optional("stop_mk", c.sweep.stop_mk);
        r.optional("points", c.sweep.points);
        r.finish();
        if (!(c.sweep.start_mk > 0)) fail("sweep.start_mk", "must be positive");
        if (!(c.sweep.stop_mk >= c.sweep.start_mk)) fail("sweep.stop_mk", "must not be below start_mk");
        if (c.sweep.points < 1) fail("sweep.points", "must be at least 1");
    }
    if (root.has("fisher")) {
        ObjectReader r(root.child("fisher"), "fisher");
        r.optional("shots", c.fisher.shots);
        r.optional("degeneracy", c.fisher.degeneracy);
        r.finish();
        if (!(c.fisher.shots >= 1)) fail("fisher.shots", "must be at least 1");
        if (!(c.fisher.degeneracy >= 2)) fail("fisher.degeneracy", "must be at least 2");
    }
    if (root.has("fit")) {
        ObjectReader r(root.child("fit"), "fit");
        r.optional("estimator", c.fit.estimator);
        r.optional("qp_cutoff_mk", c.fit.qp_cutoff_mk);
        r.finish();
        try {
            (void)parse_ratio_kind(c.fit.estimator);
        } catch (const DomainError& e) {
            fail("fit.estimator", e.what());
        }
        if (!(c.fit.qp_cutoff_mk > 0)) fail("fit.qp_cutoff_mk", "must be positive");
    }
    if (root.has("output")) {
        ObjectReader r(root.child("output"), "output");
        r.optional("path", c.output.path);
        optional_enum(r, "format", c.output.format, kFormats);
        r.finish();
    }
    root.optional("seed", c.seed);
    root.optional("threads", c.threads);
    if (c.threads < 1) fail("threads", "must be at least 1");
    root.finish();
    return c;
}

RunConfig parse_run_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return parse_run_config(j);
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config_text(ss.str());
}

json to_json(const RunConfig& c) {
    json device = {
        {"f_ge_ghz", c.device.f_ge_ghz},       {"f_ef_ghz", c.device.f_ef_ghz},
        {"gamma1_base_mhz", c.device.gamma1_base_mhz}, {"ef_rate_factor", c.device.ef_rate_factor},
        {"ec_mhz", c.device.ec_mhz},           {"gap_uev", c.device.gap_uev},
        {"rn_kohm", c.device.rn_kohm},         {"zeta_inverse", c.device.zeta_inverse},
    };
    if (!c.device.preset.empty()) device["preset"] = c.device.preset;
    device["ej_mhz"] = c.device.ej_mhz ? json(*c.device.ej_mhz) : json(nullptr);

    json baths = json::array();
    for (const auto& b : c.baths) {
        baths.push_back({{"gamma1_mhz", b.gamma1_mhz},
                         {"temperature_mk", b.temperature_mk ? json(*b.temperature_mk) : json(nullptr)}});
    }
    return {
        {"device", device},
        {"baths", baths},
        {"rates",
         {{"convention", enum_name(c.rates.convention, kConventions)},
          {"model", enum_name(c.rates.model, kModels)},
          {"quasiparticles", c.rates.quasiparticles}}},
        {"protocol",
         {{"pi_pulse_ns", c.protocol.pi_pulse_ns},
          {"readout_us", c.protocol.readout_us},
          {"efficiency_ge", c.protocol.efficiency_ge},
          {"efficiency_ef", c.protocol.efficiency_ef},
          {"readout_mode", enum_name(c.protocol.readout_mode, kReadoutModes)},
          {"delay_placement", enum_name(c.protocol.delay_placement, kPlacements)}}},
        {"responses", {{"phi_g", c.responses.phi_g}, {"phi_e", c.responses.phi_e}, {"phi_f", c.responses.phi_f}}},
        {"noise",
         {{"sigma_v", c.noise.sigma_v}, {"shots", c.noise.shots}, {"measurement_time_s", c.noise.measurement_time_s}}},
        {"sweep", {{"start_mk", c.sweep.start_mk}, {"stop_mk", c.sweep.stop_mk}, {"points", c.sweep.points}}},
        {"fisher", {{"shots", c.fisher.shots}, {"degeneracy", c.fisher.degeneracy}}},
        {"fit", {{"estimator", c.fit.estimator}, {"qp_cutoff_mk", c.fit.qp_cutoff_mk}}},
        {"output", {{"path", c.output.path}, {"format", enum_name(c.output.format, kFormats)}}},
        {"seed", c.seed},
        {"threads", c.threads},
    };
}

Device resolve_device(const DeviceSpec& spec) {
    Device d;
    d.name = spec.preset.empty() ? "custom" : spec.preset;
    d.qubit.omega_ge = units::omega_from_ghz(spec.f_ge_ghz);
    d.qubit.omega_ef = units::omega_from_ghz(spec.f_ef_ghz);
    d.qubit.gamma1_base = units::omega_from_mhz(spec.gamma1_base_mhz);
    d.qubit.ef_rate_factor = spec.ef_rate_factor;
    d.junction.gap = units::joule_from_uev(spec.gap_uev);
    d.junction.charging_energy = units::joule_from_mhz_h(spec.ec_mhz);
    if (spec.ej_mhz) d.junction.josephson_energy = units::joule_from_mhz_h(*spec.ej_mhz);
    d.junction.normal_resistance = units::ohm_from_kohm(spec.rn_kohm);
    d.junction.subgap_transparency_inverse = spec.zeta_inverse;
    return d;
}

std::vector<std::string> config_warnings(const RunConfig& config) {
    std::vector<std::string> w;
    const Device d = resolve_device(config.device);
    const double ratio = ej_over_ec(d.qubit, d.junction);
    if (ratio < 20.0) {
        std::ostringstream os;
        os << "E_J/E_c = " << ratio << " is below 20; the device is outside the transmon regime";
        w.push_back(os.str());
    }
    if (config.device.f_ef_ghz >= config.device.f_ge_ghz) {
        w.push_back("f_ef is not below f_ge; anharmonicity is non-negative");
    }
    return w;
}

ExperimentConfig to_experiment_config(const RunConfig& config) {
    const Device d = resolve_device(config.device);
    ExperimentConfig e;
    e.qubit = d.qubit;
    e.junction = d.junction;
    for (const auto& b : config.baths) {
        BathEntry entry;
        entry.gamma1 = units::omega_from_mhz(b.gamma1_mhz);
        if (b.temperature_mk) entry.temperature = units::kelvin_from_mk(*b.temperature_mk);
        e.baths.push_back(entry);
    }
    e.quasiparticles = config.rates.quasiparticles;
    e.rate_options.convention = config.rates.convention;
    e.rate_options.model = config.rates.model;
    e.protocol.pi_pulse_duration = units::seconds_from_ns(config.protocol.pi_pulse_ns);
    e.protocol.readout_duration = units::seconds_from_us(config.protocol.readout_us);
    e.protocol.efficiency_ge = config.protocol.efficiency_ge;
    e.protocol.efficiency_ef = config.protocol.efficiency_ef;
    e.protocol.readout_mode = config.protocol.readout_mode;
    e.protocol.delay_placement = config.protocol.delay_placement;
    e.responses = {config.responses.phi_g, config.responses.phi_e, config.responses.phi_f};
    e.noise.sigma_v = config.noise.sigma_v;
    e.noise.shots = config.noise.shots;
    e.noise.measurement_time = config.noise.measurement_time_s;
    e.threads = config.threads;
    return e;
}

ThermalizationOptions to_thermalization_options(const RunConfig& config) {
    ThermalizationOptions o;
    o.omega_ge = units::omega_from_ghz(config.device.f_ge_ghz);
    o.qp_onset_cutoff = units::kelvin_from_mk(config.fit.qp_cutoff_mk);
    return o;
}

RatioKind parse_ratio_kind(const std::string& name) {
    if (name.size() == 2 && name[0] >= 'A' && name[0] <= 'C' && name[1] >= '1' && name[1] <= '3') {
        return {static_cast<RatioFamily>(name[0] - 'A'), name[1] - '0'};
    }
    throw DomainError("unknown estimator '" + name + "' (expected A1..C3)");
}

}  // namespace qthermo
