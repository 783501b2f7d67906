#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qthermo/errors.hpp"
#include "qthermo/experiment.hpp"
#include "qthermo/quasiparticle.hpp"

namespace qthermo::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": malformed JSON: " + e.what());
    }
}

std::vector<double> grid_kelvin(const RunConfig& c) {
    auto g = linear_grid(c.sweep.start_mk, c.sweep.stop_mk, static_cast<std::size_t>(c.sweep.points));
    for (double& t : g) t = units::kelvin_from_mk(t);
    return g;
}

Table new_table(const char* command, const RunConfig& config) {
    Table t;
    t.metadata = {{"command", command},
                  {"seed", std::to_string(config.seed)},
                  {"config", to_json(config).dump()}};
    return t;
}

const char* format_name(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

RunConfig with_overrides(nlohmann::json j, const CommandOptions& options) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    if (!options.preset.empty()) j["device"] = {{"preset", options.preset}};
    if (options.seed) j["seed"] = *options.seed;
    if (!options.out.empty() || options.format) {
        if (!j.contains("output")) j["output"] = nlohmann::json::object();
        if (!j["output"].is_object()) throw ConfigError("config: output: expected an object");
        if (!options.out.empty()) j["output"]["path"] = options.out;
        if (options.format) j["output"]["format"] = format_name(*options.format);
    }
    return parse_run_config(j);
}

// configuration recorded in the header of a table written by this tool
std::optional<RunConfig> recorded_config(const Table& input, const std::string& source, const CommandOptions& options) {
    for (const auto& [k, v] : input.metadata) {
        if (k != "config") continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(v);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(source + ": recorded config is malformed: " + e.what());
        }
        j.erase("output");
        return with_overrides(std::move(j), options);
    }
    return std::nullopt;
}

}  // namespace

RunConfig resolve_run_config(const CommandOptions& options) {
    return with_overrides(options.config_path.empty() ? nlohmann::json::object() : read_json_file(options.config_path),
                          options);
}

Table cmd_rates(const RunConfig& config) {
    const ExperimentConfig exp = to_experiment_config(config);
    validate(exp);
    const auto conv = config.rates.convention;
    Table t = new_table("rates", config);
    t.columns = {"T_mK", "gamma1_qp", "tau1_qp_us", "tau1_total_us", "gamma_phi_tunneling", "gamma_phi_andreev"};
    for (double temp : grid_kelvin(config)) {
        const double gqp = gamma1_qp(exp.qubit, exp.junction, temp);
        const double g1 = total_gamma1(experiment_rates(exp, temp), conv);
        const double tau_qp = gqp > 0 ? units::us_from_seconds(lifetime_from_rate(gqp, conv))
                                      : std::numeric_limits<double>::infinity();
        t.add_row({units::mk_from_kelvin(temp), gqp, tau_qp, units::us_from_seconds(lifetime_from_rate(g1, conv)),
                   gamma_phi_qp_tunneling(exp.junction, temp), gamma_phi_andreev(exp.qubit, exp.junction, temp)});
    }
    return t;
}

Table cmd_sweep(const RunConfig& config) {
    const ExperimentConfig exp = to_experiment_config(config);
    const auto temps = grid_kelvin(config);
    const auto records = sweep(temps, exp, config.seed);

    Table t = new_table("sweep", config);
    t.metadata.emplace_back("substreams", "point i uses the seed-derived substream i");
    t.columns = {"T_mK", "failed", "gamma1", "rate_ge_up", "rate_ge_down", "rate_ef_up", "rate_ef_down",
                 "p_g", "p_e", "p_f", "T_eff_mK"};
    for (auto label : kSequenceLabels) t.columns.emplace_back(sequence_name(label));
    for (auto label : kSequenceLabels) t.columns.push_back("var_" + std::string(sequence_name(label)));
    for (const auto& k : kAllRatios) {
        const std::string n = k.name();
        t.columns.push_back("ratio_" + n);
        t.columns.push_back("status_" + n);
        t.columns.push_back("T_" + n + "_mK");
        t.columns.push_back("err_" + n + "_mK");
    }
    t.columns.emplace_back("spread");

    for (const auto& r : records) {
        std::vector<double> row;
        row.reserve(t.columns.size());
        const bool failed = !r.failure.empty();
        if (failed) std::cerr << "warning: T = " << units::mk_from_kelvin(r.t_set) << " mK: " << r.failure << '\n';
        row.push_back(units::mk_from_kelvin(r.t_set));
        row.push_back(failed ? 1.0 : 0.0);
        row.push_back(failed ? kNaN : r.gamma1);
        for (double v : {r.rates.ge_up, r.rates.ge_down, r.rates.ef_up, r.rates.ef_down}) row.push_back(failed ? kNaN : v);
        for (int i = 0; i < 3; ++i) row.push_back(failed ? kNaN : r.initial(i));
        double t_eff = kNaN;
        if (!failed && r.initial(0) > 0 && r.initial(1) > 0 && r.initial(1) < r.initial(0)) {
            t_eff = units::mk_from_kelvin(teff_from_ratio(r.initial(1) / r.initial(0), exp.qubit.omega_ge));
        }
        row.push_back(t_eff);
        for (auto label : kSequenceLabels) row.push_back(failed ? kNaN : r.outcomes[label]);
        for (auto label : kSequenceLabels) {
            row.push_back(!failed && r.outcome_variances ? (*r.outcome_variances)[label] : kNaN);
        }
        for (std::size_t i = 0; i < kAllRatios.size(); ++i) {
            const auto& k = kAllRatios[i];
            const auto& ratio = r.estimates.ratios[i];
            const auto& est = r.estimates.temperatures[i];
            const bool ok = !failed && est.status == EstimateStatus::ok;
            row.push_back(failed ? kNaN : ratio.value);
            row.push_back(failed ? kNaN : static_cast<double>(est.status));
            row.push_back(ok ? units::mk_from_kelvin(est.temperature) : kNaN);
            const auto& err = r.errors[static_cast<std::size_t>(k.method - 1)];
            double bar = kNaN;
            if (ok && err && config.noise.shots > 0) {
                bar = units::mk_from_kelvin(err->temperature_relative[static_cast<std::size_t>(k.family)] * est.temperature);
            }
            row.push_back(bar);
        }
        row.push_back(failed ? kNaN : r.estimates.relative_spread());
        t.add_row(std::move(row));
    }
    return t;
}

Table cmd_fisher(const RunConfig& config) {
    const Device d = resolve_device(config.device);
    const double n = config.fisher.shots;
    Table t = new_table("fisher", config);
    t.columns = {"T_mK", "rel_error_2lvl", "rel_error_3lvl", "rel_error_N10", "NET"};
    for (double temp : grid_kelvin(config)) {
        const double x_ge = reduced_energy(d.qubit.omega_ge, temp);
        const double x_gf = reduced_energy(d.qubit.omega_gf(), temp);
        const double r2 = averaged_relative_error(qfi_bound_two_level(x_ge), n);
        const double r3 = averaged_relative_error(qfi_bound_three_level(x_ge, x_gf), n);
        const double rn = averaged_relative_error(qfi_bound_two_level(x_ge, config.fisher.degeneracy), n);
        const double net_mk = units::mk_from_kelvin(net(r2 * temp, config.noise.measurement_time_s));
        t.add_row({units::mk_from_kelvin(temp), r2, r3, rn, net_mk});
    }
    return t;
}

Table cmd_fit(const Table& input, const RunConfig& config) {
    std::vector<ThermalizationPoint> points;
    const bool external = input.has_column("T_mxc_mK");
    if (external) {
        for (const char* c : {"T_eff_mK", "gamma1"}) {
            if (!input.has_column(c)) throw IoError(std::string("fit input: missing column '") + c + "'");
        }
        const auto tm = input.column("T_mxc_mK");
        const auto te = input.column("T_eff_mK");
        const auto g = input.column("gamma1");
        const auto tes = input.has_column("T_eff_sigma_mK") ? input.column("T_eff_sigma_mK") : std::vector<double>(tm.size(), 0.0);
        const auto gs = input.has_column("gamma1_sigma") ? input.column("gamma1_sigma") : std::vector<double>(tm.size(), 0.0);
        for (std::size_t i = 0; i < tm.size(); ++i) {
            if (!std::isfinite(te[i]) || !std::isfinite(g[i])) continue;
            points.push_back({units::kelvin_from_mk(tm[i]), units::kelvin_from_mk(te[i]),
                              units::kelvin_from_mk(std::isfinite(tes[i]) ? tes[i] : 0.0), g[i],
                              std::isfinite(gs[i]) ? gs[i] : 0.0});
        }
    } else {
        const std::string est = config.fit.estimator;
        const std::string tcol = "T_" + est + "_mK", ecol = "err_" + est + "_mK";
        for (const std::string& c : {std::string("T_mK"), tcol, std::string("gamma1")}) {
            if (!input.has_column(c)) {
                throw IoError("fit input: missing column '" + c +
                              "' (expected sweep output or columns T_mxc_mK, T_eff_mK, gamma1)");
            }
        }
        const auto tm = input.column("T_mK");
        const auto te = input.column(tcol);
        const auto g = input.column("gamma1");
        const auto err = input.has_column(ecol) ? input.column(ecol) : std::vector<double>(tm.size(), kNaN);
        for (std::size_t i = 0; i < tm.size(); ++i) {
            if (!std::isfinite(te[i]) || !std::isfinite(g[i])) continue;
            points.push_back({units::kelvin_from_mk(tm[i]), units::kelvin_from_mk(te[i]),
                              std::isfinite(err[i]) ? units::kelvin_from_mk(err[i]) : 0.0, g[i], 0.0});
        }
    }
    const auto fits = thermalization_analysis(points, to_thermalization_options(config));

    Table t = new_table("fit", config);
    t.metadata.emplace_back("fits", "1: gamma1 against n(T_eff); 2: n(T_eff) against n(T_mxc)");
    t.metadata.emplace_back("k_over_b", format_double(fits.gamma1_vs_n.slope / fits.gamma1_vs_n.offset));
    t.columns = {"fit", "slope", "offset", "slope_error", "offset_error", "covariance", "chi2", "points"};
    int id = 1;
    for (const FitResult* f : {&fits.gamma1_vs_n, &fits.n_eff_vs_n_mxc}) {
        t.add_row({static_cast<double>(id++), f->slope, f->offset, f->slope_error, f->offset_error, f->covariance,
                   f->chi2, static_cast<double>(f->points)});
    }
    return t;
}

int run(int argc, char** argv) {
    CLI::App app{"qthermo: transmon thermometry simulator"};
    app.require_subcommand(1);

    CommandOptions opts;
    std::string format;
    std::uint64_t seed = 0;
    std::string input_path;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON run configuration");
        sub->add_option("--preset", opts.preset, "device preset (R2-I, R4-I, R3-II, Q2-III)");
        sub->add_option("--seed", seed, "master RNG seed (u64)");
        sub->add_option("--out", opts.out, "output path, stdout when omitted");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };
    CLI::App* rates = app.add_subcommand("rates", "relaxation and dephasing rates against temperature");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "simulated thermometry sweep");
    CLI::App* fisher = app.add_subcommand("fisher", "quantum Fisher information bounds");
    CLI::App* fit = app.add_subcommand("fit", "thermalization fits of a sweep or external table");
    for (auto* s : {rates, sweep_cmd, fisher, fit}) add_common(s);
    fit->add_option("input", input_path, "CSV input (sweep output or T_mxc_mK, T_eff_mK, gamma1 table)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        if (active->count("--seed")) opts.seed = seed;
        if (!format.empty()) opts.format = format == "json" ? OutputFormat::json : OutputFormat::csv;

        Table input;
        std::optional<RunConfig> recorded;
        if (active == fit) {
            input = read_csv_file(input_path);
            if (opts.config_path.empty() && opts.preset.empty()) recorded = recorded_config(input, input_path, opts);
        }

        const RunConfig config = recorded ? *recorded : resolve_run_config(opts);
        for (const auto& w : config_warnings(config)) std::cerr << "warning: " << w << '\n';
        Table out;
        if (active == rates) {
            out = cmd_rates(config);
        } else if (active == sweep_cmd) {
            out = cmd_sweep(config);
        } else if (active == fisher) {
            out = cmd_fisher(config);
        } else {
            out = cmd_fit(input, config);
        }
        write_table(config.output.path, out, config.output.format);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}

}  // namespace qthermo::cli
