#include "leslie1d/initial_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace leslie1d {

using std::numbers::pi;

namespace {

// Samples of eta_delta(k dx) for |k| <= r, scaled so that dx * sum = 1.
std::vector<double> kernel(double delta, double dx) {
    const int r = std::max(0, static_cast<int>(std::ceil(delta / dx)) - 1);
    std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (int j = -r; j <= r; ++j) {
        const double s = j * dx / delta;
        const double v = std::abs(s) < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
        k[static_cast<std::size_t>(j + r)] = v;
        sum += v;
    }
    for (double& v : k) v /= sum * dx;
    return k;
}

double lp_distance(std::span<const double> a, std::span<const double> b, double p, const Grid1D& grid) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::pow(std::abs(a[i] - b[i]), p);
    return std::pow(grid.integrate(d), 1.0 / p);
}

}  // namespace

double smooth_bump(double x, double a, double b) {
    const double s = (2.0 * x - (a + b)) / (b - a);
    return std::abs(s) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
}

RawInitialData raw_initial_data(const InitialSpec& spec, const Grid1D& grid) {
    const auto m = static_cast<std::size_t>(grid.num_nodes());
    RawInitialData raw;
    raw.rho0.assign(m, 1.0);
    raw.m0.assign(m, 0.0);
    raw.l0.assign(m, 0.0);
    raw.n0.assign(m, pi / 4);
    auto x = [&](std::size_t i) { return grid.x(static_cast<int>(i)); };

    if (spec.preset == "static") return raw;
    if (spec.preset == "shear") {
        for (std::size_t i = 0; i < m; ++i) raw.l0[i] = std::sin(pi * x(i));
        return raw;
    }
    if (spec.preset == "relaxation") {
        for (std::size_t i = 0; i < m; ++i) raw.n0[i] = std::cos(pi * x(i));
        return raw;
    }
    if (spec.preset == "smooth_random") {
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::array<double, 3> a{}, bu{}, bv{}, bn{};
        for (int k = 0; k < 3; ++k) {
            a[static_cast<std::size_t>(k)] = 0.15 * unit(rng);
            bu[static_cast<std::size_t>(k)] = 0.5 * unit(rng) / (k + 1);
            bv[static_cast<std::size_t>(k)] = 0.5 * unit(rng) / (k + 1);
            bn[static_cast<std::size_t>(k)] = 0.3 * unit(rng) / (k + 1);
        }
        for (std::size_t i = 0; i < m; ++i) {
            double r = 1.0, u = 0.0, v = 0.0, n = pi / 4;
            for (std::size_t k = 0; k < 3; ++k) {
                const double j = static_cast<double>(k + 1);
                r += a[k] * std::cos(j * pi * x(i));
                u += bu[k] * std::sin(j * pi * x(i));
                v += bv[k] * std::sin(j * pi * x(i));
                n += bn[k] * std::cos(j * pi * x(i));
            }
            raw.rho0[i] = r;
            raw.m0[i] = r * u;
            raw.l0[i] = r * v;
            raw.n0[i] = n;
        }
        return raw;
    }
    if (spec.preset == "rough_density") {
        for (std::size_t i = 0; i < m; ++i) {
            const double xi = x(i);
            double r = 0.0;
            if (spec.profile == "vacuum_patch") {
                r = xi >= 0.4 && xi <= 0.6 ? 0.0 : 1.0;
            } else {
                r = smooth_bump(xi, 0.1, 0.45) + 0.7 * smooth_bump(xi, 0.55, 0.9);
            }
            raw.rho0[i] = r;
            // m0/sqrt(rho0) = rho0 sin(2 pi x), l0/sqrt(rho0) = rho0 sin(pi x)
            const double s = std::sqrt(r);
            raw.m0[i] = s * r * std::sin(2 * pi * xi);
            raw.l0[i] = s * r * std::sin(pi * xi);
            raw.n0[i] = pi / 4 + 0.5 * std::cos(pi * xi);
        }
        return raw;
    }
    throw ConfigError("unknown initial preset '" + spec.preset + "'");
}

std::vector<double> mollify_zero_extension(std::span<const double> f, double delta, const Grid1D& grid) {
    if (!(delta > 0.0)) throw std::invalid_argument("mollification needs delta > 0");
    const auto k = kernel(delta, grid.dx());
    const int r = static_cast<int>(k.size() / 2);
    const int m = grid.num_nodes();
    const auto w = grid.weights();
    std::vector<double> out(static_cast<std::size_t>(m), 0.0);
    for (int i = 0; i < m; ++i) {
        double acc = 0.0;
        for (int j = std::max(0, i - r); j <= std::min(m - 1, i + r); ++j) {
            const auto sj = static_cast<std::size_t>(j);
            acc += k[static_cast<std::size_t>(i - j + r)] * w[sj] * f[sj];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

std::vector<double> mollify_even_extension(std::span<const double> f, double delta, const Grid1D& grid) {
    if (!(delta > 0.0)) throw std::invalid_argument("mollification needs delta > 0");
    const auto k = kernel(delta, grid.dx());
    const int r = static_cast<int>(k.size() / 2);
    const int n = grid.num_cells();
    auto reflect = [n](int j) {
        // Period 2n reflection; valid for any j once the kernel is narrower than the domain.
        j %= 2 * n;
        if (j < 0) j += 2 * n;
        return j <= n ? j : 2 * n - j;
    };
    std::vector<double> out(f.size(), 0.0);
    for (int i = 0; i <= n; ++i) {
        double acc = 0.0;
        for (int j = -r; j <= r; ++j) acc += k[static_cast<std::size_t>(j + r)] * f[static_cast<std::size_t>(reflect(i + j))];
        out[static_cast<std::size_t>(i)] = acc * grid.dx();
    }
    return out;
}

FlowState mollify_initial_data(const RawInitialData& raw, double delta, const Grid1D& grid) {
    if (!(delta > 0.0)) throw std::invalid_argument("mollification needs delta > 0");
    const std::size_t m = raw.rho0.size();
    std::vector<double> gu(m, 0.0), gv(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (raw.rho0[i] < 0.0) throw std::invalid_argument("raw density must be nonnegative");
        if (raw.rho0[i] > 0.0) {
            const double s = std::sqrt(raw.rho0[i]);
            gu[i] = raw.m0[i] / s;
            gv[i] = raw.l0[i] / s;
        }
    }
    FlowState s;
    s.rho = mollify_zero_extension(raw.rho0, delta, grid);
    for (double& r : s.rho) r += delta;
    s.u = mollify_zero_extension(gu, delta, grid);
    s.v = mollify_zero_extension(gv, delta, grid);
    for (std::size_t i = 0; i < m; ++i) {
        const double q = std::sqrt(s.rho[i]);
        s.u[i] /= q;
        s.v[i] /= q;
    }
    s.u.front() = s.u.back() = 0.0;
    s.v.front() = s.v.back() = 0.0;
    s.n = mollify_even_extension(raw.n0, delta, grid);
    return s;
}

FlowState unmollified_state(const RawInitialData& raw) {
    FlowState s;
    s.rho = raw.rho0;
    s.n = raw.n0;
    s.u.resize(raw.rho0.size());
    s.v.resize(raw.rho0.size());
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        if (!(s.rho[i] > 0.0)) throw std::invalid_argument("raw data contains vacuum; a mollification delta is required");
        s.u[i] = raw.m0[i] / s.rho[i];
        s.v[i] = raw.l0[i] / s.rho[i];
    }
    s.u.front() = s.u.back() = 0.0;
    s.v.front() = s.v.back() = 0.0;
    return s;
}

FlowState build_initial_state(const RunConfig& cfg, const Grid1D& grid) {
    const RawInitialData raw = raw_initial_data(cfg.initial, grid);
    return cfg.mollify_delta > 0.0 ? mollify_initial_data(raw, cfg.mollify_delta, grid) : unmollified_state(raw);
}

InitialDataErrors initial_data_errors(const RawInitialData& raw, double delta, double gamma_ad, const Grid1D& grid) {
    const FlowState s = mollify_initial_data(raw, delta, grid);
    const std::size_t m = s.size();
    InitialDataErrors e;
    e.delta = delta;
    e.min_rho = *std::min_element(s.rho.begin(), s.rho.end());
    e.rho_Lgamma = lp_distance(s.rho, raw.rho0, gamma_ad, grid);

    const auto dn = face_differences(s.n, grid);
    const auto dn0 = face_differences(raw.n0, grid);
    double grad = 0.0;
    for (std::size_t c = 0; c < dn.size(); ++c) grad += grid.dx() * std::pow(dn[c] - dn0[c], 2);
    e.n_H1 = std::sqrt(std::pow(lp_distance(s.n, raw.n0, 2.0, grid), 2) + grad);

    std::vector<double> su(m), sv(m), gu(m), gv(m), ru(m), rv(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double q = std::sqrt(s.rho[i]);
        su[i] = q * s.u[i];
        sv[i] = q * s.v[i];
        ru[i] = s.rho[i] * s.u[i];
        rv[i] = s.rho[i] * s.v[i];
        const double q0 = std::sqrt(raw.rho0[i]);
        gu[i] = q0 > 0.0 ? raw.m0[i] / q0 : 0.0;
        gv[i] = q0 > 0.0 ? raw.l0[i] / q0 : 0.0;
    }
    e.sqrt_rho_u_L2 = lp_distance(su, gu, 2.0, grid);
    e.sqrt_rho_v_L2 = lp_distance(sv, gv, 2.0, grid);
    const double p = 2.0 * gamma_ad / (gamma_ad + 1.0);
    e.rho_u_Lp = lp_distance(ru, raw.m0, p, grid);
    e.rho_v_Lp = lp_distance(rv, raw.l0, p, grid);
    return e;
}

double fitted_order(std::span<const double> deltas, std::span<const double> errors) {
    const std::size_t n = deltas.size();
    if (n < 2 || errors.size() != n) throw std::invalid_argument("fitted_order needs matching series of length >= 2");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(deltas[i]);
        my += std::log(errors[i]);
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(deltas[i]) - mx;
        sxy += dx * (std::log(errors[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

}  // namespace leslie1d
