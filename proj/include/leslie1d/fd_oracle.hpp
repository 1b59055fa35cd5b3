#pragma once

#include <stdexcept>

#include "leslie1d/diagnostics.hpp"
#include "leslie1d/fields.hpp"
#include "leslie1d/grid.hpp"
#include "leslie1d/leslie_coefficients.hpp"

namespace leslie1d {

enum class Limiter { none, minmod };

struct OracleConfig {
    double cfl = 0.9;
    Limiter limiter = Limiter::none;
};

class CflViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Conservative upwind continuity step on the dual cells. Boundary fluxes are zero.
std::vector<double> fd_continuity_step(const Grid1D& grid, std::span<const double> rho, std::span<const double> u,
                                       double dt, Limiter limiter = Limiter::none);

/// One step of the finite-difference scheme. The A(n)-viscous part is implicit
/// (block tridiagonal), transport, pressure and elastic terms are explicit.
FlowState step_fd(const FlowState& state, const LeslieSet& c, const DerivedViscosities& d, double dt,
                  const Grid1D& grid, const OracleConfig& cfg = {});

/// Fills ndot from the director equation with finite-difference gradients.
FlowState initialize_fd(const FlowState& raw, const DerivedViscosities& d, const Grid1D& grid);

Trajectory run_fd(const FlowState& initial, const LeslieSet& c, const Grid1D& grid, double dt, double t_end,
                  const OracleConfig& cfg = {}, int snapshot_every = 0);

}  // namespace leslie1d
