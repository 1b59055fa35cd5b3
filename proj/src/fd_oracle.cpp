#include "leslie1d/fd_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "leslie1d/galerkin.hpp"
#include "leslie1d/tridiagonal.hpp"

namespace leslie1d {

namespace {

double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

Eigen::Matrix2d as_matrix(const DissipationMatrix& a) {
    Eigen::Matrix2d m;
    m << a.a11, a.a12, a.a21, a.a22;
    return m;
}

}  // namespace

std::vector<double> fd_continuity_step(const Grid1D& grid, std::span<const double> rho, std::span<const double> u,
                                       double dt, Limiter limiter) {
    const std::size_t m = rho.size();
    const auto w = grid.weights();
    // flux[i] sits on the face between node i and i+1
    std::vector<double> flux(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double uf = 0.5 * (u[i] + u[i + 1]);
        const std::size_t up = uf >= 0.0 ? i : i + 1;
        double rf = rho[up];
        if (limiter == Limiter::minmod && up > 0 && up + 1 < m) {
            const double slope = minmod(rho[up + 1] - rho[up], rho[up] - rho[up - 1]);
            rf += (uf >= 0.0 ? 0.5 : -0.5) * slope;
        }
        flux[i] = rf * uf;
    }
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double right = i + 1 < m ? flux[i] : 0.0;
        const double left = i > 0 ? flux[i - 1] : 0.0;
        out[i] = rho[i] - dt * (right - left) / w[i];
    }
    return out;
}

FlowState initialize_fd(const FlowState& raw, const DerivedViscosities& d, const Grid1D& grid) {
    FlowState s = raw;
    s.ux.reset();
    s.vx.reset();
    const VelocityGradients g = velocity_gradients(s, grid);
    const auto lap = director_laplacian(s.n, grid);
    std::vector<double> nd(s.size());
    for (std::size_t i = 0; i < nd.size(); ++i) {
        const double n2 = 2.0 * s.n[i];
        nd[i] = (lap[i] + 0.5 * d.gamma2 * g.ux[i] * std::sin(n2) + 0.5 * (d.gamma1 - d.gamma2 * std::cos(n2)) * g.vx[i])
                / d.gamma1;
    }
    s.ndot = std::move(nd);
    return s;
}

FlowState step_fd(const FlowState& state, const LeslieSet& c, const DerivedViscosities& d, double dt,
                  const Grid1D& grid, const OracleConfig& cfg) {
    const std::size_t m = state.size();
    const double dx = grid.dx();
    double umax = 0.0;
    for (double u : state.u) umax = std::max(umax, std::abs(u));
    if (dt * umax / dx > cfg.cfl) {
        std::ostringstream os;
        os << "CFL number " << dt * umax / dx << " exceeds " << cfg.cfl;
        throw CflViolation(os.str());
    }

    FlowState out;
    out.time = state.time + dt;
    out.rho = fd_continuity_step(grid, state.rho, state.u, dt, cfg.limiter);

    const VelocityGradients g = velocity_gradients(state, grid);
    out.n = advance_director(grid, state.n, state.n, state.u, g.ux, g.vx, d, dt);
    std::vector<double> ndot = material_derivative(grid, state.n, out.n, state.u, dt);

    const std::vector<double> p = pressure(out.rho, c.gamma_ad);
    const std::vector<double> lap = director_laplacian(out.n, grid);
    const std::vector<double> nx = director_gradient(out.n, grid);

    // Face quantities between node i and i+1.
    std::vector<Eigen::Matrix2d> a_face(m - 1);
    std::vector<Eigen::Vector2d> b_face(m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double nf = 0.5 * (out.n[i] + out.n[i + 1]);
        a_face[i] = as_matrix(dissipation_matrix(c, nf));
        const FluxPoint b = director_flux_part(c, nf, 0.5 * (ndot[i] + ndot[i + 1]));
        b_face[i] = Eigen::Vector2d(b.f1, b.f2);
    }

    const std::size_t interior = m - 2;
    std::vector<Eigen::Matrix2d> lo(interior), di(interior), up(interior);
    std::vector<Eigen::Vector2d> rhs(interior);
    const double k = dt / (dx * dx);
    for (std::size_t j = 0; j < interior; ++j) {
        const std::size_t i = j + 1;
        const double r = out.rho[i];
        lo[j] = -k * a_face[i - 1];
        up[j] = -k * a_face[i];
        di[j] = r * Eigen::Matrix2d::Identity() + k * (a_face[i - 1] + a_face[i]);

        const Eigen::Vector2d y(state.u[i], state.v[i]);
        const Eigen::Vector2d y_l(state.u[i - 1], state.v[i - 1]);
        const Eigen::Vector2d y_r(state.u[i + 1], state.v[i + 1]);
        const Eigen::Vector2d dy = state.u[i] >= 0.0 ? Eigen::Vector2d((y - y_l) / dx) : Eigen::Vector2d((y_r - y) / dx);
        Eigen::Vector2d explicit_terms = (b_face[i] - b_face[i - 1]) / dx - r * state.u[i] * dy;
        explicit_terms(0) -= (p[i + 1] - p[i - 1]) / (2.0 * dx) + lap[i] * nx[i];
        rhs[j] = r * y + dt * explicit_terms;
    }
    const std::vector<Eigen::Vector2d> y_new = solve_block_tridiagonal(lo, di, up, rhs);
    out.u.assign(m, 0.0);
    out.v.assign(m, 0.0);
    for (std::size_t j = 0; j < interior; ++j) {
        out.u[j + 1] = y_new[j](0);
        out.v[j + 1] = y_new[j](1);
    }
    out.ndot = std::move(ndot);
    return out;
}

Trajectory run_fd(const FlowState& initial, const LeslieSet& c, const Grid1D& grid, double dt, double t_end,
                  const OracleConfig& cfg, int snapshot_every) {
    const DerivedViscosities d = derive_viscosities(c);
    FlowState state = initialize_fd(initial, d, grid);
    for (double r : state.rho) {
        if (!(r > 0.0)) throw std::invalid_argument("initial density must be positive (mollify vacuum data)");
    }
    Trajectory traj;
    traj.stats.mass_scale = grid.integrate(state.rho);
    traj.stats.min_dt = dt;
    traj.stats.min_rho = *std::min_element(state.rho.begin(), state.rho.end());
    traj.stats.max_rho = *std::max_element(state.rho.begin(), state.rho.end());
    traj.snapshots.push_back(state);
    traj.ledger.push_back(make_ledger(state, c, d, grid));

    const double t0 = state.time;
    const double eps = 1e-12 * std::max(1.0, t_end);
    long step_index = 0;
    while (state.time - t0 < t_end - eps) {
        const double h = std::min(dt, t_end - (state.time - t0));
        FlowState next = step_fd(state, c, d, h, grid, cfg);
        ++step_index;
        auto& st = traj.stats;
        ++st.steps;
        st.min_dt = std::min(st.min_dt, h);
        st.max_step_mass_change =
            std::max(st.max_step_mass_change, std::abs(grid.integrate(next.rho) - grid.integrate(state.rho)));
        st.min_rho = std::min(st.min_rho, *std::min_element(next.rho.begin(), next.rho.end()));
        st.max_rho = std::max(st.max_rho, *std::max_element(next.rho.begin(), next.rho.end()));
        if (!(st.min_rho > 0.0)) throw SolverAbort("finite-difference oracle lost density positivity");
        state = std::move(next);
        traj.ledger.push_back(make_ledger(state, c, d, grid));
        const bool last = !(state.time - t0 < t_end - eps);
        if (last || (snapshot_every > 0 && step_index % snapshot_every == 0)) traj.snapshots.push_back(state);
    }
    return traj;
}

}  // namespace leslie1d
