#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "leslie1d/diagnostics.hpp"
#include "leslie1d/fields.hpp"
#include "leslie1d/grid.hpp"
#include "leslie1d/leslie_coefficients.hpp"

namespace leslie1d {

/// Sine-mode coefficients: u = sum c_j sin(j pi x), v = sum d_j sin(j pi x), j = 1..K.
struct SpectralVelocity {
    int num_modes = 0;
    std::vector<double> c, d;
};

/// Tabulated sin(j pi x_i) and its x-derivative at the grid nodes.
/// Values at the two endpoint nodes are exactly zero.
class SineBasis {
public:
    SineBasis(const Grid1D& grid, int num_modes);

    int num_modes() const { return static_cast<int>(phi_.rows()); }
    const Eigen::MatrixXd& values() const { return phi_; }
    const Eigen::MatrixXd& derivatives() const { return dphi_; }

    std::vector<double> reconstruct(std::span<const double> coeffs) const;
    std::vector<double> reconstruct_derivative(std::span<const double> coeffs) const;
    /// Evaluation at an arbitrary point in [0,1].
    static double evaluate(std::span<const double> coeffs, double x);

private:
    Eigen::MatrixXd phi_, dphi_;
};

/// c_j = 2 int u0 phi_j (the basis has int phi_j^2 = 1/2), trapezoid on the grid.
SpectralVelocity project_initial_velocity(std::span<const double> u0, std::span<const double> v0, int num_modes,
                                          const Grid1D& grid);

/// Density along Lagrangian cells over one step window. rho0 is normalised by
/// the total mass so that the mass coordinate runs over [0,1].
struct LagrangianDensity {
    std::vector<double> rho0;
    /// Integral of u_X over the window, per Lagrangian cell.
    std::vector<double> accumulated_uX;
    /// Cell-face labels X_f, from 0 to 1.
    std::vector<double> mass_coordinate;
    double mass_scale = 1.0;
};

class DenominatorTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// rho = rho0 / (1 + rho0 int u_X), returned in physical units (times mass_scale).
/// Throws DenominatorTooSmall if a denominator falls below 1/2.
std::vector<double> advance_density(const LagrangianDensity& ld);

/// Lagrangian density stage on the grid: moves the dual-cell faces with the
/// velocity given by sine coefficients (Heun in time), applies advance_density per cell, then remaps the
/// cumulative mass back onto the fixed dual cells by monotone cubic interpolation.
std::vector<double> transport_density(const Grid1D& grid, std::span<const double> rho,
                                      std::span<const double> u_start, std::span<const double> u_end, double dt);

/// Backward-Euler director step with trigonometric coefficients taken at n_lag.
std::vector<double> advance_director(const Grid1D& grid, std::span<const double> n_old,
                                     std::span<const double> n_lag, std::span<const double> u,
                                     std::span<const double> ux, std::span<const double> vx,
                                     const DerivedViscosities& d, double dt);

/// Convenience form: lag at state.n, finite-difference gradients unless the state carries its own.
std::vector<double> advance_director(const FlowState& state, const DerivedViscosities& d, double dt,
                                     const Grid1D& grid);

/// (n_new - n_old)/dt + u D0 n_new.
std::vector<double> material_derivative(const Grid1D& grid, std::span<const double> n_old,
                                        std::span<const double> n_new, std::span<const double> u, double dt);

struct VelocityStepInput {
    const FlowState* old_state = nullptr;  // rho^m, u^m, v^m
    std::span<const double> rho;           // density at the new level
    std::span<const double> n;             // director at the new level
    std::span<const double> ndot;
    std::span<const double> u_transport;   // current iterate for transport terms
    std::span<const double> v_transport;
};

/// Implicit in the A(n)-viscous part, other terms taken from the iterate.
SpectralVelocity advance_velocity_modes(const VelocityStepInput& in, const SineBasis& basis, const Grid1D& grid,
                                        const LeslieSet& c, double dt);

struct SolverConfig {
    double dt = 1e-3;
    double picard_tol = 1e-10;
    int picard_max = 50;
    double dt_min = 1e-12;
    /// Keep the velocity at its initial value (director relaxation studies).
    bool freeze_velocity = false;
    double density_bound_factor = 10.0;
};

class PicardNotConverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverAbort : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StepResult {
    FlowState state;
    SpectralVelocity modes;
    int picard_iterations = 0;
    double dt = 0.0;
    int halvings = 0;
};

class GalerkinSolver {
public:
    GalerkinSolver(Grid1D grid, LeslieSet coefficients, int num_modes, SolverConfig config);

    const Grid1D& grid() const { return grid_; }
    const SineBasis& basis() const { return basis_; }
    const DerivedViscosities& viscosities() const { return visc_; }
    const SolverConfig& config() const { return cfg_; }

    /// Projects the velocity onto the modes and fills ndot and gradients.
    std::pair<FlowState, SpectralVelocity> initialize(const FlowState& raw) const;

    /// One Picard-converged step of exactly dt. Throws PicardNotConverged or DenominatorTooSmall.
    StepResult try_step(const FlowState& state, const SpectralVelocity& modes, double dt) const;

    /// Attempts dt, halving on failure; the accepted step may be shorter than dt.
    StepResult step(const FlowState& state, const SpectralVelocity& modes, double dt) const;

    Trajectory run(const FlowState& initial, double t_end, int snapshot_every = 0) const;

private:
    FlowState finish_state(double time, std::vector<double> rho, std::vector<double> n, std::vector<double> ndot,
                           const SpectralVelocity& modes) const;

    Grid1D grid_;
    LeslieSet coef_;
    DerivedViscosities visc_;
    SineBasis basis_;
    SolverConfig cfg_;
};

}  // namespace leslie1d
