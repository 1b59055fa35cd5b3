#pragma once

#include <optional>
#include <span>
#include <vector>

#include "leslie1d/grid.hpp"
#include "leslie1d/leslie_coefficients.hpp"

namespace leslie1d {

/// Grid-sampled state at one instant. n is the director angle.
struct FlowState {
    double time = 0.0;
    std::vector<double> rho, u, v, n;
    /// Material derivative n_t + u n_x, filled by the solver.
    std::optional<std::vector<double>> ndot;
    /// Velocity gradients consistent with the solver's representation.
    /// When absent, finite differences are used.
    std::optional<std::vector<double>> ux, vx;

    std::size_t size() const { return rho.size(); }
};

struct FluxPair {
    std::vector<double> f1, f2;
};

struct FluxPoint {
    double f1 = 0.0, f2 = 0.0;
};

std::vector<double> pressure(std::span<const double> rho, double gamma_ad);

/// The rate-of-director part of the flux: f - A(n)(u_x, v_x).
FluxPoint director_flux_part(const LeslieSet& c, double n, double ndot);

/// Pointwise flux f = A(n)(u_x, v_x) + director part.
FluxPoint leslie_flux_point(const LeslieSet& c, double n, double ndot, double ux, double vx);

/// Exact x-derivative of leslie_flux_point along smooth fields.
FluxPoint flux_divergence_point(const LeslieSet& c, double n, double n_x, double ndot, double ndot_x,
                                double ux, double uxx, double vx, double vxx);

/// Fluxes at the cell interfaces from face differences and face averages.
/// Throws std::invalid_argument when state.ndot is missing.
FluxPair leslie_fluxes(const FlowState& state, const LeslieSet& c, const Grid1D& grid);

/// -n_xx n_x per node.
std::vector<double> elastic_coupling(const FlowState& state, const Grid1D& grid);

struct VelocityGradients {
    std::vector<double> ux, vx;
};
VelocityGradients velocity_gradients(const FlowState& state, const Grid1D& grid);

/// gamma1 ndot - gamma2/2 u_x sin2n - (gamma1 - gamma2 cos2n) v_x / 2 - n_xx per node.
std::vector<double> director_residual(const FlowState& state, const DerivedViscosities& d, const Grid1D& grid);

}  // namespace leslie1d
