#include "leslie1d/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "leslie1d/derivation.hpp"

namespace leslie1d {

EnergyLedger energy(const FlowState& state, double gamma_ad, const Grid1D& grid) {
    const auto w = grid.weights();
    EnergyLedger e;
    e.time = state.time;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double r = std::max(state.rho[i], 0.0);
        e.kinetic += 0.5 * w[i] * r * (state.u[i] * state.u[i] + state.v[i] * state.v[i]);
        e.internal += w[i] * std::pow(r, gamma_ad) / (gamma_ad - 1.0);
    }
    for (double d : face_differences(state.n, grid)) e.elastic += 0.5 * grid.dx() * d * d;
    e.total = e.kinetic + e.internal + e.elastic;
    return e;
}

DissipationBreakdown dissipation(const FlowState& state, const LeslieSet& c, const DerivedViscosities& d,
                                 const Grid1D& grid) {
    if (!state.ndot) throw std::invalid_argument("dissipation: state has no ndot");
    (void)d;
    const auto& nd = *state.ndot;
    const VelocityGradients g = velocity_gradients(state, grid);
    const auto w = grid.weights();
    double cmax = 1.0;
    for (double a : c.alpha) cmax = std::max(cmax, std::abs(a));

    DissipationBreakdown out;
    double scale = 0.0;
    for (std::size_t i = 0; i < nd.size(); ++i) {
        const auto parts = completed_squares_density(g.ux[i], g.vx[i], nd[i], state.n[i], c);
        for (std::size_t k = 0; k < 5; ++k) out.parts[k] += w[i] * parts[k];
        scale += w[i] * cmax * (nd[i] * nd[i] + g.ux[i] * g.ux[i] + g.vx[i] * g.vx[i]);
    }
    for (double p : out.parts) out.total += p;
    if (out.total < -1e-10 * std::max(scale, 1e-300)) {
        throw std::logic_error("dissipation is negative for a valid coefficient set");
    }
    return out;
}

double dissipation_direct(const FlowState& state, const LeslieSet& c, const Grid1D& grid) {
    if (!state.ndot) throw std::invalid_argument("dissipation_direct: state has no ndot");
    const auto& nd = *state.ndot;
    const VelocityGradients g = velocity_gradients(state, grid);
    const auto w = grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < nd.size(); ++i) {
        s += w[i] * direct_dissipation_density(g.ux[i], g.vx[i], nd[i], state.n[i], c);
    }
    return s;
}

double entropy_like(const FlowState& state, const Grid1D& grid) {
    const auto w = grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double r = state.rho[i];
        if (r > 0.0) s += w[i] * r * std::log(r);
    }
    return s;
}

EnergyLedger make_ledger(const FlowState& state, const LeslieSet& c, const DerivedViscosities& d,
                         const Grid1D& grid) {
    EnergyLedger e = energy(state, c.gamma_ad, grid);
    const DissipationBreakdown diss = dissipation(state, c, d, grid);
    e.dissipation = diss.total;
    e.dissipation_parts = diss.parts;
    const auto w = grid.weights();
    const auto nxx = director_laplacian(state.n, grid);
    const auto nx = director_gradient(state.n, grid);
    const auto& nd = *state.ndot;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double r = std::max(state.rho[i], 0.0);
        e.mass += w[i] * r;
        e.rho_L2gamma_increment += w[i] * std::pow(r, 2.0 * c.gamma_ad);
        e.nxx_sq += w[i] * nxx[i] * nxx[i];
        const double nt = nd[i] - state.u[i] * nx[i];
        e.nt_sq += w[i] * nt * nt;
    }
    e.entropy = entropy_like(state, grid);
    return e;
}

BudgetReport energy_budget(std::span<const EnergyLedger> ledger) {
    BudgetReport r;
    if (ledger.empty()) return r;
    const double e0 = ledger.front().total;
    double acc = 0.0;
    r.defect.push_back(0.0);
    for (std::size_t m = 1; m < ledger.size(); ++m) {
        acc += ledger[m].dissipation * (ledger[m].time - ledger[m - 1].time);
        const double def = ledger[m].total - e0 + acc;
        r.defect.push_back(def);
        r.max_abs_defect = std::max(r.max_abs_defect, std::abs(def));
        r.max_step_increase = std::max(r.max_step_increase, ledger[m].total - ledger[m - 1].total);
        r.max_increase_over_initial = std::max(r.max_increase_over_initial, ledger[m].total - e0);
    }
    return r;
}

namespace {

template <class F>
double time_trapezoid(std::span<const EnergyLedger> ledger, F&& f) {
    double s = 0.0;
    for (std::size_t m = 1; m < ledger.size(); ++m) {
        s += 0.5 * (f(ledger[m]) + f(ledger[m - 1])) * (ledger[m].time - ledger[m - 1].time);
    }
    return s;
}

}  // namespace

double high_integrability(std::span<const EnergyLedger> ledger) {
    return time_trapezoid(ledger, [](const EnergyLedger& e) { return e.rho_L2gamma_increment; });
}

DirectorNorms director_norms(std::span<const EnergyLedger> ledger) {
    return {std::sqrt(time_trapezoid(ledger, [](const EnergyLedger& e) { return e.nxx_sq; })),
            std::sqrt(time_trapezoid(ledger, [](const EnergyLedger& e) { return e.nt_sq; }))};
}

FluxDiagnostic effective_viscous_flux(const FlowState& state, const LeslieSet& c, const Grid1D& grid) {
    const VelocityGradients g = velocity_gradients(state, grid);
    const auto p = pressure(state.rho, c.gamma_ad);
    FluxDiagnostic h;
    h.h1.resize(state.size());
    h.h2.resize(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) {
        const DissipationMatrix ai = inverse_dissipation_matrix(c, state.n[i]);
        h.h1[i] = g.ux[i] - ai.a11 * p[i];
        h.h2[i] = g.vx[i] - ai.a21 * p[i];
    }
    return h;
}

double pairing_window(double x) {
    const double s = (x - 0.5) / 0.45;
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

std::array<double, 2> windowed_flux_pairing(const FlowState& state, const LeslieSet& c, const Grid1D& grid) {
    const FluxDiagnostic h = effective_viscous_flux(state, c, grid);
    const auto w = grid.weights();
    std::array<double, 2> out{};
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double f = w[i] * pairing_window(grid.x(static_cast<int>(i))) * state.rho[i];
        out[0] += f * h.h1[i];
        out[1] += f * h.h2[i];
    }
    return out;
}

}  // namespace leslie1d
