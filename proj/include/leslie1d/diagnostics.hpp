#pragma once

#include <array>
#include <span>
#include <vector>

#include "leslie1d/fields.hpp"
#include "leslie1d/grid.hpp"
#include "leslie1d/leslie_coefficients.hpp"

namespace leslie1d {

struct EnergyLedger {
    double time = 0.0;
    double kinetic = 0.0;
    double internal = 0.0;
    double elastic = 0.0;
    double total = 0.0;
    double dissipation = 0.0;
    std::array<double, 5> dissipation_parts{};
    double mass = 0.0;
    double entropy = 0.0;
    /// Integral of rho^(2 gamma) at this instant.
    double rho_L2gamma_increment = 0.0;
    /// Integrals of n_xx^2 and n_t^2 at this instant.
    double nxx_sq = 0.0;
    double nt_sq = 0.0;
};

struct SolverStats {
    long steps = 0;
    long picard_iterations_total = 0;
    int picard_iterations_max = 0;
    long dt_halvings = 0;
    double min_dt = 0.0;
    double max_step_mass_change = 0.0;
    double min_rho = 0.0;
    double max_rho = 0.0;
    /// Set when rho leaves [1/(f c1 e^t), f c1 e^t] for the configured factor f.
    bool density_bound_flagged = false;
    double mass_scale = 1.0;
};

struct Trajectory {
    std::vector<FlowState> snapshots;
    std::vector<EnergyLedger> ledger;
    SolverStats stats;
};

/// Energy parts only: kinetic, internal, elastic, total.
/// The elastic term uses face differences, 1/2 sum dx (D+ n)^2.
EnergyLedger energy(const FlowState& state, double gamma_ad, const Grid1D& grid);

struct DissipationBreakdown {
    double total = 0.0;
    std::array<double, 5> parts{};
};

/// Completed-square dissipation integrals. Throws std::logic_error if the
/// total is below -1e-10 times a scale (impossible for valid coefficients).
DissipationBreakdown dissipation(const FlowState& state, const LeslieSet& c, const DerivedViscosities& d,
                                 const Grid1D& grid);

/// The same integral from the direct quadratic form.
double dissipation_direct(const FlowState& state, const LeslieSet& c, const Grid1D& grid);

double entropy_like(const FlowState& state, const Grid1D& grid);

/// Full ledger entry for one state (requires ndot).
EnergyLedger make_ledger(const FlowState& state, const LeslieSet& c, const DerivedViscosities& d,
                         const Grid1D& grid);

struct BudgetReport {
    std::vector<double> defect;
    double max_abs_defect = 0.0;
    /// Largest E(t_m) - E(t_{m-1}) and E(t_m) - E(0) over the series.
    double max_step_increase = 0.0;
    double max_increase_over_initial = 0.0;
};

/// defect(t_m) = E(t_m) - E(0) + sum_{k<=m} D(t_k) (t_k - t_{k-1}).
BudgetReport energy_budget(std::span<const EnergyLedger> ledger);

/// Space-time integral of rho^(2 gamma), trapezoid in time.
double high_integrability(std::span<const EnergyLedger> ledger);

struct DirectorNorms {
    double nxx = 0.0;
    double nt = 0.0;
};

/// L2 space-time norms of n_xx and n_t.
DirectorNorms director_norms(std::span<const EnergyLedger> ledger);

struct FluxDiagnostic {
    std::vector<double> h1, h2;
};

/// H = (u_x, v_x) - A^{-1}(n) (rho^gamma, 0) per node.
FluxDiagnostic effective_viscous_flux(const FlowState& state, const LeslieSet& c, const Grid1D& grid);

/// Smooth compactly supported window on (0,1) used for flux pairings.
double pairing_window(double x);

/// Integrals of window * rho * H for both components.
std::array<double, 2> windowed_flux_pairing(const FlowState& state, const LeslieSet& c, const Grid1D& grid);

}  // namespace leslie1d
