#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "leslie1d/config.hpp"
#include "leslie1d/diagnostics.hpp"
#include "leslie1d/initial_data.hpp"

namespace leslie1d {

struct RunOutcome {
    Trajectory trajectory;
    BudgetReport budget;
    double rho2gamma_integral = 0.0;
    DirectorNorms director;
    /// E(t_m) <= E(t_{m-1}) + energy_tol for every step.
    bool energy_monotone = true;
};

/// Validates coefficients (throws InvalidCoefficients), builds the initial state and runs the configured scheme.
RunOutcome execute_run(const RunConfig& cfg);

nlohmann::json summary_json(const RunConfig& cfg, const RunOutcome& out);

/// energy.csv, fields_NNNN.csv per snapshot and summary.json.
void write_run_outputs(const RunConfig& cfg, const RunOutcome& out, const std::filesystem::path& dir);

struct TimeSeries {
    std::vector<double> t, value;
};

struct SweepMember {
    double delta = 0.0;
    double final_energy = 0.0;
    double max_defect = 0.0;
    double rho2gamma_integral = 0.0;
    bool energy_monotone = true;
    TimeSeries energy, entropy, pairing_u, pairing_v;
    InitialDataErrors initial;
};

struct SweepReport {
    std::vector<double> deltas;
    std::vector<SweepMember> members;
    /// Successive-delta distances per quantity (size = deltas - 1).
    std::map<std::string, std::vector<double>> cauchy;
    std::map<std::string, bool> cauchy_decreasing;
    /// Set when any Cauchy series fails to decrease; never an error.
    bool inconclusive = false;
    /// max/min of the space-time rho^(2 gamma) integrals.
    double rho2gamma_spread = 0.0;
    /// Least-squares order in delta per initial-data distance, and the order from the two smallest deltas.
    std::map<std::string, double> initial_order_fit, initial_order_finest;
    /// Set when a member run failed; members holds the runs that finished.
    std::optional<std::string> aborted;
};

/// Max over a.t of |a - b| with b linearly interpolated in time.
double series_distance(const TimeSeries& a, const TimeSeries& b);

/// Runs one solver per delta on a worker pool. When out_dir is set, writes
/// delta_<k>/ run outputs and sweep.json.
SweepReport run_sweep(const RunConfig& cfg, const std::vector<double>& deltas,
                      const std::optional<std::filesystem::path>& out_dir, unsigned threads = 0);

nlohmann::json sweep_json(const SweepReport& report);

int run_command(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int sweep_command(const std::filesystem::path& config, const std::optional<std::vector<double>>& deltas,
                  std::ostream& out, std::ostream& err);
int verify_command(std::uint64_t seed, long samples, std::ostream& out);
int validate_coefficients_command(const std::filesystem::path& config, bool json, std::ostream& out,
                                  std::ostream& err);

}  // namespace leslie1d
