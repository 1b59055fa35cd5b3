#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "leslie1d/fd_oracle.hpp"
#include "leslie1d/leslie_coefficients.hpp"

namespace leslie1d {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Scheme { galerkin, fd };

struct InitialSpec {
    /// static | shear | relaxation | smooth_random | rough_density
    std::string preset = "shear";
    std::uint64_t seed = 1;
    /// rough_density only: vacuum_bumps | vacuum_patch
    std::string profile = "vacuum_bumps";
};

struct RunConfig {
    LeslieSet coefficients = LeslieSet::reference_example();
    int cells = 128;
    int modes = 16;
    double dt = 1e-3;
    double t_end = 0.5;
    Scheme scheme = Scheme::galerkin;
    InitialSpec initial;
    double mollify_delta = 0.0;
    std::filesystem::path output_dir = "output";
    int snapshot_every = 0;
    double picard_tol = 1e-10;
    int picard_max = 50;
    double energy_tol = 1e-8;
    bool freeze_velocity = false;
    OracleConfig oracle;
    /// Deltas for the sweep command when none are given on the command line.
    std::vector<double> sweep_deltas{0.1, 0.05, 0.025, 0.0125};
    /// Resolution used to measure initial-data convergence in the sweep.
    int initial_check_cells = 8192;

    /// Checks the structural invariants (not the coefficient inequalities).
    void check() const;
    nlohmann::json to_json() const;
};

/// Flattened "section.key" -> value pairs.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_ini(const std::string& text);
ConfigMap parse_json_config(const std::string& text);
RunConfig config_from_map(const ConfigMap& map);

/// Reads INI or JSON (chosen by extension, .json means JSON).
RunConfig load_config(const std::filesystem::path& path);

/// Output directory with the LESLIE1D_OUTPUT_ROOT prefix applied to relative paths.
std::filesystem::path resolve_output_dir(const std::filesystem::path& dir);

std::vector<double> parse_delta_list(const std::string& text);

}  // namespace leslie1d
