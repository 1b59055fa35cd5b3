#include "leslie1d/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <math.h>  // pchip.hpp calls isnan unqualified

#include <boost/math/interpolators/pchip.hpp>

#include "leslie1d/tridiagonal.hpp"

namespace leslie1d {

using std::numbers::pi;

SineBasis::SineBasis(const Grid1D& grid, int num_modes) {
    if (num_modes < 1) throw std::invalid_argument("SineBasis needs at least one mode");
    const int m = grid.num_nodes();
    phi_.setZero(num_modes, m);
    dphi_.setZero(num_modes, m);
    for (int j = 0; j < num_modes; ++j) {
        const double k = (j + 1) * pi;
        for (int i = 0; i < m; ++i) {
            const double x = grid.x(i);
            if (i > 0 && i < m - 1) phi_(j, i) = std::sin(k * x);
            dphi_(j, i) = k * std::cos(k * x);
        }
    }
}

std::vector<double> SineBasis::reconstruct(std::span<const double> coeffs) const {
    const Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    const Eigen::VectorXd v = phi_.transpose() * c;
    return {v.data(), v.data() + v.size()};
}

std::vector<double> SineBasis::reconstruct_derivative(std::span<const double> coeffs) const {
    const Eigen::Map<const Eigen::VectorXd> c(coeffs.data(), static_cast<Eigen::Index>(coeffs.size()));
    const Eigen::VectorXd v = dphi_.transpose() * c;
    return {v.data(), v.data() + v.size()};
}

double SineBasis::evaluate(std::span<const double> coeffs, double x) {
    // sin((j+1) t) = 2 cos t sin(j t) - sin((j-1) t)
    const double t = pi * x;
    const double two_cos = 2.0 * std::cos(t);
    double s_prev = 0.0, s = std::sin(t), acc = 0.0;
    for (double c : coeffs) {
        acc += c * s;
        const double next = two_cos * s - s_prev;
        s_prev = s;
        s = next;
    }
    return acc;
}

SpectralVelocity project_initial_velocity(std::span<const double> u0, std::span<const double> v0, int num_modes,
                                          const Grid1D& grid) {
    const SineBasis basis(grid, num_modes);
    const auto w = grid.weights();
    Eigen::VectorXd wu(grid.num_nodes()), wv(grid.num_nodes());
    for (int i = 0; i < grid.num_nodes(); ++i) {
        wu(i) = 2.0 * w[static_cast<std::size_t>(i)] * u0[static_cast<std::size_t>(i)];
        wv(i) = 2.0 * w[static_cast<std::size_t>(i)] * v0[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd c = basis.values() * wu;
    const Eigen::VectorXd d = basis.values() * wv;
    return {num_modes, {c.data(), c.data() + c.size()}, {d.data(), d.data() + d.size()}};
}

std::vector<double> advance_density(const LagrangianDensity& ld) {
    std::vector<double> rho(ld.rho0.size());
    for (std::size_t f = 0; f < rho.size(); ++f) {
        const double den = 1.0 + ld.rho0[f] * ld.accumulated_uX[f];
        if (!(den >= 0.5)) {
            std::ostringstream os;
            os << "density denominator " << den << " below 1/2 in Lagrangian cell " << f;
            throw DenominatorTooSmall(os.str());
        }
        rho[f] = ld.mass_scale * ld.rho0[f] / den;
    }
    return rho;
}

std::vector<double> transport_density(const Grid1D& grid, std::span<const double> rho,
                                      std::span<const double> u_start, std::span<const double> u_end, double dt) {
    const std::size_t cells = rho.size();
    const auto w = grid.weights();

    // Dual-cell faces: 0, dx/2, 3dx/2, ..., 1.
    std::vector<double> faces(cells + 1);
    faces[0] = 0.0;
    for (std::size_t f = 1; f < cells; ++f) faces[f] = (static_cast<double>(f) - 0.5) * grid.dx();
    faces[cells] = 1.0;

    LagrangianDensity ld;
    ld.mass_scale = grid.integrate(rho);
    if (!(ld.mass_scale > 0.0)) throw std::invalid_argument("transport_density: total mass must be positive");
    ld.rho0.resize(cells);
    ld.mass_coordinate.resize(cells + 1);
    ld.accumulated_uX.resize(cells);
    ld.mass_coordinate[0] = 0.0;
    for (std::size_t f = 0; f < cells; ++f) {
        ld.rho0[f] = rho[f] / ld.mass_scale;
        ld.mass_coordinate[f + 1] = ld.mass_coordinate[f] + w[f] * ld.rho0[f];
    }

    std::vector<double> moved(cells + 1);
    moved[0] = 0.0;
    moved[cells] = 1.0;
    for (std::size_t f = 1; f < cells; ++f) {
        const double us = SineBasis::evaluate(u_start, faces[f]);
        const double predicted = faces[f] + dt * us;
        moved[f] = faces[f] + 0.5 * dt * (us + SineBasis::evaluate(u_end, predicted));
    }
    for (std::size_t f = 0; f < cells; ++f) {
        const double dX = ld.mass_coordinate[f + 1] - ld.mass_coordinate[f];
        const double stretch = (moved[f + 1] - moved[f]) - (faces[f + 1] - faces[f]);
        ld.accumulated_uX[f] = dX > 0.0 ? stretch / dX : 0.0;
    }
    const std::vector<double> rho_lag = advance_density(ld);

    // Cumulative mass on the moved faces, then back onto the fixed faces.
    std::vector<double> xs(moved), ys(cells + 1);
    ys[0] = 0.0;
    for (std::size_t f = 0; f < cells; ++f) ys[f + 1] = ys[f] + rho_lag[f] * (moved[f + 1] - moved[f]);
    const double total = ys[cells];
    using boost::math::interpolators::pchip;
    const pchip<std::vector<double>> cumulative(std::move(xs), std::move(ys));
    std::vector<double> out(cells);
    double prev = 0.0;
    for (std::size_t f = 0; f < cells; ++f) {
        const double next = f + 1 == cells ? total : cumulative(faces[f + 1]);
        out[f] = (next - prev) / w[f];
        prev = next;
    }
    return out;
}

std::vector<double> advance_director(const Grid1D& grid, std::span<const double> n_old,
                                     std::span<const double> n_lag, std::span<const double> u,
                                     std::span<const double> ux, std::span<const double> vx,
                                     const DerivedViscosities& d, double dt) {
    const std::size_t m = n_old.size();
    const double g1 = d.gamma1, g2 = d.gamma2;
    const double idx2 = 1.0 / (grid.dx() * grid.dx());
    const double i2dx = 0.5 / grid.dx();
    std::vector<double> lo(m), di(m), up(m), rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        di[i] = g1 / dt + 2.0 * idx2;
        const double n2 = 2.0 * n_lag[i];
        rhs[i] = g1 / dt * n_old[i] + 0.5 * g2 * ux[i] * std::sin(n2) + 0.5 * (g1 - g2 * std::cos(n2)) * vx[i];
        if (i == 0) {
            up[i] = -2.0 * idx2;
        } else if (i + 1 == m) {
            lo[i] = -2.0 * idx2;
        } else {
            lo[i] = -g1 * u[i] * i2dx - idx2;
            up[i] = g1 * u[i] * i2dx - idx2;
        }
    }
    return solve_tridiagonal(lo, di, up, rhs);
}

std::vector<double> advance_director(const FlowState& state, const DerivedViscosities& d, double dt,
                                     const Grid1D& grid) {
    const VelocityGradients g = velocity_gradients(state, grid);
    return advance_director(grid, state.n, state.n, state.u, g.ux, g.vx, d, dt);
}

std::vector<double> material_derivative(const Grid1D& grid, std::span<const double> n_old,
                                        std::span<const double> n_new, std::span<const double> u, double dt) {
    const std::vector<double> nx = director_gradient(n_new, grid);
    std::vector<double> out(n_new.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (n_new[i] - n_old[i]) / dt + u[i] * nx[i];
    return out;
}

SpectralVelocity advance_velocity_modes(const VelocityStepInput& in, const SineBasis& basis, const Grid1D& grid,
                                        const LeslieSet& c, double dt) {
    const FlowState& old = *in.old_state;
    const int k = basis.num_modes();
    const int m = grid.num_nodes();
    const auto w = grid.weights();
    const Eigen::MatrixXd& phi = basis.values();
    const Eigen::MatrixXd& dphi = basis.derivatives();

    const std::vector<double> lap = director_laplacian(in.n, grid);
    const std::vector<double> nx = director_gradient(in.n, grid);

    Eigen::VectorXd w_rho(m), w_a11(m), w_a12(m), w_a21(m), w_a22(m);
    Eigen::VectorXd mom_u(m), mom_v(m), flux_u(m), flux_v(m), body_u(m);
    for (int i = 0; i < m; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const double r = std::max(in.rho[s], 0.0);
        const DissipationMatrix a = dissipation_matrix(c, in.n[s]);
        const FluxPoint b = director_flux_part(c, in.n[s], in.ndot[s]);
        w_rho(i) = w[s] * r;
        w_a11(i) = w[s] * a.a11;
        w_a12(i) = w[s] * a.a12;
        w_a21(i) = w[s] * a.a21;
        w_a22(i) = w[s] * a.a22;
        mom_u(i) = w[s] * old.rho[s] * old.u[s];
        mom_v(i) = w[s] * old.rho[s] * old.v[s];
        const double p = r > 0.0 ? std::pow(r, c.gamma_ad) : 0.0;
        flux_u(i) = w[s] * (-b.f1 + r * in.u_transport[s] * in.u_transport[s] + p);
        flux_v(i) = w[s] * (-b.f2 + r * in.u_transport[s] * in.v_transport[s]);
        body_u(i) = -w[s] * lap[s] * nx[s];
    }

    auto weighted_gram = [](const Eigen::MatrixXd& a, const Eigen::VectorXd& wts, const Eigen::MatrixXd& b) {
        return Eigen::MatrixXd(a * wts.asDiagonal() * b.transpose());
    };
    const Eigen::MatrixXd mass = weighted_gram(phi, w_rho, phi);
    Eigen::MatrixXd sys(2 * k, 2 * k);
    sys.topLeftCorner(k, k) = mass + dt * weighted_gram(dphi, w_a11, dphi);
    sys.topRightCorner(k, k) = dt * weighted_gram(dphi, w_a12, dphi);
    sys.bottomLeftCorner(k, k) = dt * weighted_gram(dphi, w_a21, dphi);
    sys.bottomRightCorner(k, k) = mass + dt * weighted_gram(dphi, w_a22, dphi);

    Eigen::VectorXd rhs(2 * k);
    rhs.head(k) = phi * mom_u + dt * (dphi * flux_u + phi * body_u);
    rhs.tail(k) = phi * mom_v + dt * (dphi * flux_v);

    const Eigen::VectorXd sol = sys.partialPivLu().solve(rhs);
    if (!sol.allFinite()) throw std::runtime_error("advance_velocity_modes: singular mode system");
    SpectralVelocity out;
    out.num_modes = k;
    out.c.assign(sol.data(), sol.data() + k);
    out.d.assign(sol.data() + k, sol.data() + 2 * k);
    return out;
}

GalerkinSolver::GalerkinSolver(Grid1D grid, LeslieSet coefficients, int num_modes, SolverConfig config)
    : grid_(std::move(grid)),
      coef_(coefficients),
      visc_(derive_viscosities(coefficients)),
      basis_(grid_, num_modes),
      cfg_(config) {
    if (!(cfg_.dt > 0.0)) throw std::invalid_argument("SolverConfig.dt must be positive");
    if (!(cfg_.picard_tol > 0.0)) throw std::invalid_argument("SolverConfig.picard_tol must be positive");
    if (cfg_.picard_max < 1) throw std::invalid_argument("SolverConfig.picard_max must be at least 1");
}

FlowState GalerkinSolver::finish_state(double time, std::vector<double> rho, std::vector<double> n,
                                       std::vector<double> ndot, const SpectralVelocity& modes) const {
    FlowState s;
    s.time = time;
    s.rho = std::move(rho);
    s.n = std::move(n);
    s.u = basis_.reconstruct(modes.c);
    s.v = basis_.reconstruct(modes.d);
    s.ux = basis_.reconstruct_derivative(modes.c);
    s.vx = basis_.reconstruct_derivative(modes.d);
    s.ndot = std::move(ndot);
    return s;
}

std::pair<FlowState, SpectralVelocity> GalerkinSolver::initialize(const FlowState& raw) const {
    const auto m = static_cast<std::size_t>(grid_.num_nodes());
    if (raw.rho.size() != m || raw.u.size() != m || raw.v.size() != m || raw.n.size() != m) {
        throw std::invalid_argument("initial state does not match the grid");
    }
    for (double r : raw.rho) {
        if (!(r > 0.0)) throw std::invalid_argument("initial density must be positive (mollify vacuum data)");
    }
    SpectralVelocity modes = project_initial_velocity(raw.u, raw.v, basis_.num_modes(), grid_);
    FlowState s = finish_state(raw.time, raw.rho, raw.n, {}, modes);
    const std::vector<double> lap = director_laplacian(s.n, grid_);
    std::vector<double> ndot(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double n2 = 2.0 * s.n[i];
        ndot[i] = (lap[i] + 0.5 * visc_.gamma2 * (*s.ux)[i] * std::sin(n2)
                   + 0.5 * (visc_.gamma1 - visc_.gamma2 * std::cos(n2)) * (*s.vx)[i])
                  / visc_.gamma1;
    }
    s.ndot = std::move(ndot);
    return {std::move(s), std::move(modes)};
}

namespace {

double max_change(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

StepResult GalerkinSolver::try_step(const FlowState& state, const SpectralVelocity& modes, double dt) const {
    std::vector<double> rho_it = state.rho;
    std::vector<double> n_it = state.n;
    std::vector<double> u_it = state.u, v_it = state.v;
    std::vector<double> ux_it = state.ux ? *state.ux : basis_.reconstruct_derivative(modes.c);
    std::vector<double> vx_it = state.vx ? *state.vx : basis_.reconstruct_derivative(modes.d);
    SpectralVelocity modes_it = modes;
    std::vector<double> ndot_it;

    for (int it = 1; it <= cfg_.picard_max; ++it) {
        std::vector<double> rho_new = transport_density(grid_, state.rho, modes.c, modes_it.c, dt);
        std::vector<double> n_new = advance_director(grid_, state.n, n_it, u_it, ux_it, vx_it, visc_, dt);
        std::vector<double> ndot_new = material_derivative(grid_, state.n, n_new, u_it, dt);

        SpectralVelocity modes_new = modes;
        if (!cfg_.freeze_velocity) {
            VelocityStepInput in{&state, rho_new, n_new, ndot_new, u_it, v_it};
            modes_new = advance_velocity_modes(in, basis_, grid_, coef_, dt);
        }
        std::vector<double> u_new = basis_.reconstruct(modes_new.c);
        std::vector<double> v_new = basis_.reconstruct(modes_new.d);

        const double change = std::max({max_change(rho_new, rho_it), max_change(n_new, n_it),
                                        max_change(u_new, u_it), max_change(v_new, v_it)});
        rho_it = std::move(rho_new);
        n_it = std::move(n_new);
        u_it = std::move(u_new);
        v_it = std::move(v_new);
        ux_it = basis_.reconstruct_derivative(modes_new.c);
        vx_it = basis_.reconstruct_derivative(modes_new.d);
        modes_it = std::move(modes_new);
        ndot_it = std::move(ndot_new);
        if (!std::isfinite(change)) break;
        if (change < cfg_.picard_tol) {
            StepResult r;
            r.state = finish_state(state.time + dt, std::move(rho_it), std::move(n_it), std::move(ndot_it), modes_it);
            r.modes = std::move(modes_it);
            r.picard_iterations = it;
            r.dt = dt;
            return r;
        }
    }
    throw PicardNotConverged("Picard iteration did not converge");
}

StepResult GalerkinSolver::step(const FlowState& state, const SpectralVelocity& modes, double dt) const {
    int halvings = 0;
    std::string last_error;
    while (dt >= cfg_.dt_min) {
        try {
            StepResult r = try_step(state, modes, dt);
            r.halvings = halvings;
            return r;
        } catch (const PicardNotConverged& e) {
            last_error = e.what();
        } catch (const DenominatorTooSmall& e) {
            last_error = e.what();
        }
        dt *= 0.5;
        ++halvings;
    }
    std::ostringstream os;
    os << "time step underflow at t=" << state.time << " (last error: " << last_error << "); min rho="
       << *std::min_element(state.rho.begin(), state.rho.end())
       << ", max rho=" << *std::max_element(state.rho.begin(), state.rho.end());
    double umax = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) umax = std::max({umax, std::abs(state.u[i]), std::abs(state.v[i])});
    os << ", max |velocity|=" << umax;
    throw SolverAbort(os.str());
}

Trajectory GalerkinSolver::run(const FlowState& initial, double t_end, int snapshot_every) const {
    auto [state, modes] = initialize(initial);
    Trajectory traj;
    traj.stats.mass_scale = grid_.integrate(state.rho);
    traj.stats.min_dt = cfg_.dt;
    const double rho_min0 = *std::min_element(state.rho.begin(), state.rho.end());
    const double rho_max0 = *std::max_element(state.rho.begin(), state.rho.end());
    const double c1 = std::max(rho_max0, 1.0 / rho_min0);
    traj.stats.min_rho = rho_min0;
    traj.stats.max_rho = rho_max0;
    traj.snapshots.push_back(state);
    traj.ledger.push_back(make_ledger(state, coef_, visc_, grid_));

    const double t0 = state.time;
    const double eps = 1e-12 * std::max(1.0, t_end);
    long step_index = 0;
    while (state.time - t0 < t_end - eps) {
        const double h = std::min(cfg_.dt, t_end - (state.time - t0));
        StepResult r = step(state, modes, h);
        ++step_index;
        auto& st = traj.stats;
        ++st.steps;
        st.picard_iterations_total += r.picard_iterations;
        st.picard_iterations_max = std::max(st.picard_iterations_max, r.picard_iterations);
        st.dt_halvings += r.halvings;
        st.min_dt = std::min(st.min_dt, r.dt);
        st.max_step_mass_change =
            std::max(st.max_step_mass_change, std::abs(grid_.integrate(r.state.rho) - grid_.integrate(state.rho)));
        const double lo = *std::min_element(r.state.rho.begin(), r.state.rho.end());
        const double hi = *std::max_element(r.state.rho.begin(), r.state.rho.end());
        st.min_rho = std::min(st.min_rho, lo);
        st.max_rho = std::max(st.max_rho, hi);
        const double bound = cfg_.density_bound_factor * c1 * std::exp(r.state.time - t0);
        if (hi > bound || lo < 1.0 / bound) st.density_bound_flagged = true;

        state = std::move(r.state);
        modes = std::move(r.modes);
        traj.ledger.push_back(make_ledger(state, coef_, visc_, grid_));
        const bool last = !(state.time - t0 < t_end - eps);
        if (last || (snapshot_every > 0 && step_index % snapshot_every == 0)) traj.snapshots.push_back(state);
    }
    return traj;
}

}  // namespace leslie1d
