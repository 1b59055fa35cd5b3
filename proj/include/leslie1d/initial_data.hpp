#pragma once

#include <vector>

#include "leslie1d/config.hpp"
#include "leslie1d/fields.hpp"
#include "leslie1d/grid.hpp"

namespace leslie1d {

/// Conserved-variable initial data; rho0 may vanish.
struct RawInitialData {
    std::vector<double> rho0, m0, l0, n0;
};

RawInitialData raw_initial_data(const InitialSpec& spec, const Grid1D& grid);

/// C-infinity bump exp(1 - 1/(1-s^2)) on (a,b), zero outside.
double smooth_bump(double x, double a, double b);

/// Discrete convolution with eta_delta: zero extension outside [0,1] (trapezoid weights).
std::vector<double> mollify_zero_extension(std::span<const double> f, double delta, const Grid1D& grid);
/// Discrete convolution after even reflection across both endpoints.
std::vector<double> mollify_even_extension(std::span<const double> f, double delta, const Grid1D& grid);

/// rho^delta = eta*rho0 + delta, u^delta = eta*(m0/sqrt(rho0)) / sqrt(rho^delta), v likewise from l0,
/// n^delta = eta*(even n0). Velocities are clamped to zero at the walls.
FlowState mollify_initial_data(const RawInitialData& raw, double delta, const Grid1D& grid);

/// Direct conversion for data without vacuum: u = m0/rho0, v = l0/rho0.
FlowState unmollified_state(const RawInitialData& raw);

/// Initial state for a run, mollified when mollify_delta > 0.
FlowState build_initial_state(const RunConfig& cfg, const Grid1D& grid);

/// Discrete-norm distances between the mollified and the raw data.
struct InitialDataErrors {
    double delta = 0.0;
    double rho_Lgamma = 0.0;      // |rho^delta - rho0| in L^gamma
    double n_H1 = 0.0;            // |n^delta - n0| in H^1
    double sqrt_rho_u_L2 = 0.0;   // |sqrt(rho^delta) u^delta - m0/sqrt(rho0)| in L^2
    double sqrt_rho_v_L2 = 0.0;
    double rho_u_Lp = 0.0;        // |rho^delta u^delta - m0| in L^(2 gamma/(gamma+1))
    double rho_v_Lp = 0.0;
    double min_rho = 0.0;
};

InitialDataErrors initial_data_errors(const RawInitialData& raw, double delta, double gamma_ad, const Grid1D& grid);

/// Least-squares slope of log(error) against log(delta).
double fitted_order(std::span<const double> deltas, std::span<const double> errors);

}  // namespace leslie1d
