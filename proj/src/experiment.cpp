#include "qthermo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "qthermo/bath_physics.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/quasiparticle.hpp"

namespace qthermo {

std::vector<BathEntry> default_baths(const DeviceParams<double>& qubit) {
    return {BathEntry{qubit.gamma1_base, std::nullopt}};
}

void validate(const ExperimentConfig& config) {
    detail::require_positive(config.qubit.omega_ge, "omega_ge");
    detail::require_positive(config.qubit.omega_ef, "omega_ef");
    detail::require_positive(config.qubit.ef_rate_factor, "ef_rate_factor");
    if (config.baths.empty()) throw ConfigError("bath list is empty");
    double total = 0;
    for (const auto& b : config.baths) {
        detail::require_non_negative(b.gamma1, "bath gamma1");
        if (b.temperature) detail::require_positive(*b.temperature, "bath temperature");
        total += b.gamma1;
    }
    if (!(total > 0)) throw ConfigError("bath list has no coupling");
    if (config.quasiparticles) {
        detail::require_positive(config.junction.gap, "gap");
        detail::require_positive(config.junction.charging_energy, "charging energy");
    }
    validate_protocol(config.protocol);
    validate_responses(config.responses);
    detail::require_non_negative(config.noise.sigma_v, "sigma_v");
    detail::require_positive(config.noise.measurement_time, "measurement time");
}

RateSet<double> experiment_rates(const ExperimentConfig& config, double t_mxc) {
    detail::require_positive(t_mxc, "temperature");
    const auto& q = config.qubit;
    const RateModel model = config.rate_options.model;
    double ge_up = 0, ge_down = 0, ef_up = 0, ef_down = 0;
    auto add = [&](double base, double extra, double t) {
        const auto [gu, gd] = detail::split_rates(base, extra, q.omega_ge, t, model);
        const auto [eu, ed] = detail::split_rates(q.ef_rate_factor * base, q.ef_rate_factor * extra, q.omega_ef, t, model);
        ge_up += gu;
        ge_down += gd;
        ef_up += eu;
        ef_down += ed;
    };
    for (const auto& b : config.baths) add(b.gamma1, 0.0, b.temperature.value_or(t_mxc));
    if (config.quasiparticles) add(0.0, gamma1_qp(q, config.junction, t_mxc), t_mxc);

    const auto c = config.rate_options.convention;
    return {transfer_rate(ge_up, c), transfer_rate(ge_down, c), transfer_rate(ef_up, c), transfer_rate(ef_down, c)};
}

double total_gamma1(const RateSet<double>& rates, LifetimeConvention convention) {
    return (rates.ge_up + rates.ge_down) * convention_factor<double>(convention);
}

McOutcomes mc_outcomes(const std::array<Population<double>, 6>& sequence_populations,
                       const PureStateResponses<double>& phi, double sigma_v, std::uint64_t shots,
                       std::uint64_t seed) {
    if (shots < 1) throw DomainError("mc_outcomes: shots must be at least 1");
    detail::require_non_negative(sigma_v, "sigma_v");
    validate_responses(phi);
    Rng rng(seed);
    const Population<double> levels = phi.vector();
    McOutcomes out;
    for (std::size_t s = 0; s < kSequenceLabels.size(); ++s) {
        const Population<double>& q = sequence_populations[s];
        validate_population(q);
        const double c0 = q(0), c1 = q(0) + q(1);
        const double shift = q.dot(levels);
        double sum = 0, sum_sq = 0;
        for (std::uint64_t i = 0; i < shots; ++i) {
            const double u = rng.uniform();
            double v = u < c0 ? levels(0) : (u < c1 ? levels(1) : levels(2));
            if (sigma_v > 0) v += sigma_v * rng.normal();
            const double d = v - shift;
            sum += d;
            sum_sq += d * d;
        }
        const double n = static_cast<double>(shots);
        out.means[kSequenceLabels[s]] = shift + sum / n;
        out.variances[kSequenceLabels[s]] = shots > 1 ? (sum_sq - sum * sum / n) / (n - 1.0) : 0.0;
    }
    return out;
}

McOutcomes mc_outcomes(const Population<double>& p, const PureStateResponses<double>& phi, double sigma_v,
                       std::uint64_t shots, std::uint64_t seed) {
    std::array<Population<double>, 6> pops;
    for (std::size_t s = 0; s < kSequenceLabels.size(); ++s) pops[s] = ideal_sequence_population(p, kSequenceLabels[s]);
    return mc_outcomes(pops, phi, sigma_v, shots, seed);
}

std::array<Population<double>, 6> readout_populations(const Population<double>& p0, const RateSet<double>& rates,
                                                      const ProtocolConfig<double>& protocol) {
    std::array<Population<double>, 6> pops;
    for (std::size_t s = 0; s < kSequenceLabels.size(); ++s) {
        pops[s] = readout_population(kSequenceLabels[s], p0, rates, protocol);
    }
    return pops;
}

SweepRecord sweep_point(const ExperimentConfig& config, double t_set, std::uint64_t seed) {
    SweepRecord rec;
    rec.t_set = t_set;
    rec.seed = seed;
    try {
        rec.rates = experiment_rates(config, t_set);
        rec.gamma1 = total_gamma1(rec.rates, config.rate_options.convention);
        rec.initial = steady_state(rec.rates);
        const auto pops = readout_populations(rec.initial, rec.rates, config.protocol);
        if (config.noise.shots > 0) {
            const auto mc = mc_outcomes(pops, config.responses, config.noise.sigma_v, config.noise.shots, seed);
            rec.outcomes = mc.means;
            rec.outcome_variances = mc.variances;
        } else {
            const Population<double> v = config.responses.vector();
            for (std::size_t s = 0; s < kSequenceLabels.size(); ++s) rec.outcomes[kSequenceLabels[s]] = pops[s].dot(v);
        }
        rec.estimates = full_report(rec.outcomes, config.qubit);

        double t_eff = t_set;
        if (rec.initial(0) > 0 && rec.initial(1) > 0 && rec.initial(1) < rec.initial(0)) {
            t_eff = teff_from_ratio(rec.initial(1) / rec.initial(0), config.qubit.omega_ge);
        }
        const double shots = config.noise.shots > 0 ? static_cast<double>(config.noise.shots) : 1.0;
        const auto noise = NoiseModel<double>::from_outcome_sigma(config.noise.sigma_v, shots);
        for (int m = 1; m <= 3; ++m) {
            try {
                rec.errors[static_cast<std::size_t>(m - 1)] = error_report(
                    rec.initial, config.responses, noise, t_eff, config.qubit.omega_ge, m, config.noise.measurement_time);
            } catch (const DomainError&) {
                rec.errors[static_cast<std::size_t>(m - 1)].reset();
            }
        }
    } catch (const std::exception& e) {
        rec.failure = e.what();
    }
    return rec;
}

std::vector<SweepRecord> sweep(std::span<const double> temperatures, const ExperimentConfig& config,
                               std::uint64_t seed) {
    validate(config);
    std::vector<SweepRecord> records(temperatures.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(temperatures.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < temperatures.size(); i = next++) {
            records[i] = sweep_point(config, temperatures[i], Rng::substream_seed(seed, i));
        }
    };
    if (workers == 1) {
        work();
        return records;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    pool.clear();
    return records;
}

std::vector<double> linear_grid(double start, double stop, std::size_t points) {
    if (points == 0) throw DomainError("grid needs at least one point");
    if (points == 1) return {start};
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) {
        g[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    return g;
}

double averaged_relative_error(const EstimateReport<double>& subject, const EstimateReport<double>& reference) {
    double sum = 0;
    int n = 0;
    for (std::size_t i = 0; i < subject.temperatures.size(); ++i) {
        const auto& s = subject.temperatures[i];
        const auto& r = reference.temperatures[i];
        if (s.status != EstimateStatus::ok || r.status != EstimateStatus::ok) continue;
        sum += (s.temperature - r.temperature) / r.temperature;
        ++n;
    }
    return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

Eigen::MatrixXd efficiency_error_surface(double temperature, std::span<const double> delta_ge,
                                         std::span<const double> delta_ef, const ExperimentConfig& config) {
    validate(config);
    for (double d : delta_ge) {
        if (!(d >= 0 && d <= 1)) throw DomainError("efficiency grid values must lie in [0, 1]");
    }
    for (double d : delta_ef) {
        if (!(d >= 0 && d <= 1)) throw DomainError("efficiency grid values must lie in [0, 1]");
    }
    ExperimentConfig base = config;
    base.noise.shots = 0;
    base.protocol.efficiency_ge = 1.0;
    base.protocol.efficiency_ef = 1.0;
    const SweepRecord reference = sweep_point(base, temperature, 0);
    if (!reference.failure.empty()) throw DomainError("efficiency_error_surface: " + reference.failure);

    Eigen::MatrixXd surface(static_cast<Eigen::Index>(delta_ge.size()), static_cast<Eigen::Index>(delta_ef.size()));
    for (std::size_t i = 0; i < delta_ge.size(); ++i) {
        for (std::size_t j = 0; j < delta_ef.size(); ++j) {
            ExperimentConfig c = base;
            c.protocol.efficiency_ge = delta_ge[i];
            c.protocol.efficiency_ef = delta_ef[j];
            const SweepRecord rec = sweep_point(c, temperature, 0);
            surface(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                rec.failure.empty() ? averaged_relative_error(rec.estimates, reference.estimates)
                                    : std::numeric_limits<double>::quiet_NaN();
        }
    }
    return surface;
}

std::vector<ThermalizationPoint> thermalization_points(std::span<const SweepRecord> records, RatioKind kind) {
    const auto it = std::find(kAllRatios.begin(), kAllRatios.end(), kind);
    if (it == kAllRatios.end()) throw DomainError("unknown ratio kind");
    const auto idx = static_cast<std::size_t>(it - kAllRatios.begin());
    std::vector<ThermalizationPoint> out;
    for (const auto& r : records) {
        if (!r.failure.empty() || r.estimates.temperatures[idx].status != EstimateStatus::ok) continue;
        ThermalizationPoint p;
        p.t_mxc = r.t_set;
        p.t_eff = r.estimates.temperatures[idx].temperature;
        const auto& err = r.errors[static_cast<std::size_t>(kind.method - 1)];
        if (r.outcome_variances && err) {
            p.t_eff_sigma = err->temperature_relative[static_cast<std::size_t>(kind.family)] * p.t_eff;
        }
        p.gamma1 = r.gamma1;
        out.push_back(p);
    }
    return out;
}

}  // namespace qthermo
