// commands.hpp: the rates / sweep / fisher / fit subcommands as table producers

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qthermo/config.hpp"
#include "qthermo/table_io.hpp"

namespace qthermo::cli {

struct CommandOptions {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<OutputFormat> format;
};

// Config file (if any) with the command-line overrides applied, then validated.
RunConfig resolve_run_config(const CommandOptions& options);

// T_mK, gamma1_qp, tau1_qp_us, tau1_total_us, gamma_phi_tunneling, gamma_phi_andreev
Table cmd_rates(const RunConfig& config);

// One row per sweep temperature; see README for the column order.
Table cmd_sweep(const RunConfig& config);

// T_mK, rel_error_2lvl, rel_error_3lvl, rel_error_N10, NET
Table cmd_fisher(const RunConfig& config);

// Accepts sweep output or a table with T_mxc_mK, T_eff_mK[, T_eff_sigma_mK], gamma1[, gamma1_sigma].
Table cmd_fit(const Table& input, const RunConfig& config);

// 0 success, 2 config, 3 IO, 4 numerical
int run(int argc, char** argv);

}  // namespace qthermo::cli
