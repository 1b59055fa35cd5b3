#include "leslie1d/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace leslie1d {

std::vector<double> pressure(std::span<const double> rho, double gamma_ad) {
    std::vector<double> p(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) p[i] = rho[i] > 0.0 ? std::pow(rho[i], gamma_ad) : 0.0;
    return p;
}

FluxPoint director_flux_part(const LeslieSet& c, double n, double ndot) {
    const double cs = std::cos(n), sn = std::sin(n);
    return {-(c[2] + c[3]) * ndot * cs * sn, c[2] * ndot * cs * cs - c[3] * ndot * sn * sn};
}

FluxPoint leslie_flux_point(const LeslieSet& c, double n, double ndot, double ux, double vx) {
    const DissipationMatrix a = dissipation_matrix(c, n);
    const FluxPoint b = director_flux_part(c, n, ndot);
    return {a.a11 * ux + a.a12 * vx + b.f1, a.a21 * ux + a.a22 * vx + b.f2};
}

FluxPoint flux_divergence_point(const LeslieSet& c, double n, double n_x, double ndot, double ndot_x,
                                double ux, double uxx, double vx, double vxx) {
    const DissipationMatrix a = dissipation_matrix(c, n);
    const DissipationMatrix da = dissipation_matrix_derivative(c, n);
    const double cs = std::cos(n), sn = std::sin(n);
    const double cxs = cs * sn;
    const double d_cxs = (cs * cs - sn * sn) * n_x;
    const double d_c2 = -2.0 * cxs * n_x;
    const double d_s2 = 2.0 * cxs * n_x;
    FluxPoint j;
    j.f1 = n_x * (da.a11 * ux + da.a12 * vx) + a.a11 * uxx + a.a12 * vxx
           - (c[2] + c[3]) * (ndot_x * cxs + ndot * d_cxs);
    j.f2 = n_x * (da.a21 * ux + da.a22 * vx) + a.a21 * uxx + a.a22 * vxx
           + c[2] * (ndot_x * cs * cs + ndot * d_c2) - c[3] * (ndot_x * sn * sn + ndot * d_s2);
    return j;
}

FluxPair leslie_fluxes(const FlowState& state, const LeslieSet& c, const Grid1D& grid) {
    if (!state.ndot) throw std::invalid_argument("leslie_fluxes: state has no ndot");
    const auto& nd = *state.ndot;
    const std::vector<double> du = face_differences(state.u, grid);
    const std::vector<double> dv = face_differences(state.v, grid);
    FluxPair out;
    out.f1.resize(du.size());
    out.f2.resize(du.size());
    for (std::size_t i = 0; i < du.size(); ++i) {
        const double nf = 0.5 * (state.n[i] + state.n[i + 1]);
        const double ndf = 0.5 * (nd[i] + nd[i + 1]);
        const FluxPoint f = leslie_flux_point(c, nf, ndf, du[i], dv[i]);
        out.f1[i] = f.f1;
        out.f2[i] = f.f2;
    }
    return out;
}

std::vector<double> elastic_coupling(const FlowState& state, const Grid1D& grid) {
    const std::vector<double> nx = director_gradient(state.n, grid);
    const std::vector<double> nxx = director_laplacian(state.n, grid);
    std::vector<double> e(nx.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = -nxx[i] * nx[i];
    return e;
}

VelocityGradients velocity_gradients(const FlowState& state, const Grid1D& grid) {
    VelocityGradients g;
    g.ux = state.ux ? *state.ux : gradient(state.u, grid);
    g.vx = state.vx ? *state.vx : gradient(state.v, grid);
    return g;
}

std::vector<double> director_residual(const FlowState& state, const DerivedViscosities& d, const Grid1D& grid) {
    if (!state.ndot) throw std::invalid_argument("director_residual: state has no ndot");
    const auto& nd = *state.ndot;
    const VelocityGradients g = velocity_gradients(state, grid);
    const std::vector<double> nxx = director_laplacian(state.n, grid);
    std::vector<double> r(nd.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double n2 = 2.0 * state.n[i];
        r[i] = d.gamma1 * nd[i] - 0.5 * d.gamma2 * g.ux[i] * std::sin(n2)
               - 0.5 * (d.gamma1 - d.gamma2 * std::cos(n2)) * g.vx[i] - nxx[i];
    }
    return r;
}

}  // namespace leslie1d
