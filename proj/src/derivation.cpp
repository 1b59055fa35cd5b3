#include "leslie1d/derivation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "leslie1d/fields.hpp"

namespace leslie1d {

using Eigen::Matrix2d;
using Eigen::Vector2d;

StressSample assemble_stress(const KinematicSample& s, const LeslieSet& c) {
    const double cs = std::cos(s.n), sn = std::sin(s.n);
    const Vector2d nv(cs, sn);
    const Vector2d tau(-sn, cs);

    // grad u with rows = components, columns = x, y; only d/dx survives.
    Matrix2d grad;
    grad << s.u_x, 0.0, s.v_x, 0.0;
    const Matrix2d D = 0.5 * (grad + grad.transpose());
    const Matrix2d omega = 0.5 * (grad - grad.transpose());
    const Vector2d ndot_vec = s.ndot * tau;
    const Vector2d N = ndot_vec - omega * nv;
    const Vector2d Dn = D * nv;
    const double nDn = nv.dot(Dn);
    const double trD = D.trace();
    const Matrix2d I = Matrix2d::Identity();
    const Matrix2d nn = nv * nv.transpose();

    StressSample out;
    out.sigma = c[0] * nDn * I + c[1] * nDn * nn + c[2] * N * nv.transpose() + c[3] * nv * N.transpose()
                + c[4] * D + c[5] * Dn * nv.transpose() + c[6] * nv * Dn.transpose() + c[7] * trD * I
                + c[8] * trD * nn;

    const double g1 = c[3] - c[2];
    const double g2 = c[6] - c[5];
    out.g = g1 * N + g2 * Dn - g2 * nDn * nv;
    out.lambda_n = s.n_x * s.n_x * nv;
    return out;
}

KinematicSample TrigProfile::evaluate(double x) const {
    KinematicSample s;
    s.n = n_offset;
    const double pi = std::numbers::pi;
    for (std::size_t k = 0; k < u_modes.size(); ++k) {
        const double w = (k + 1) * pi;
        s.u_x += u_modes[k] * w * std::cos(w * x);
        s.u_xx -= u_modes[k] * w * w * std::sin(w * x);
    }
    for (std::size_t k = 0; k < v_modes.size(); ++k) {
        const double w = (k + 1) * pi;
        s.v_x += v_modes[k] * w * std::cos(w * x);
        s.v_xx -= v_modes[k] * w * w * std::sin(w * x);
    }
    for (std::size_t k = 0; k < n_modes.size(); ++k) {
        const double w = (k + 1) * pi;
        s.n += n_modes[k] * std::cos(w * x);
        s.n_x -= n_modes[k] * w * std::sin(w * x);
        s.n_xx -= n_modes[k] * w * w * std::cos(w * x);
    }
    for (std::size_t k = 0; k < ndot_modes.size(); ++k) {
        const double w = (k + 1) * pi;
        s.ndot += ndot_modes[k] * std::cos(w * x);
        s.ndot_x -= ndot_modes[k] * w * std::sin(w * x);
    }
    return s;
}

TrigProfile TrigProfile::random(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::uniform_int_distribution<int> count(1, 3);
    TrigProfile p;
    auto fill = [&](std::vector<double>& modes, double scale) {
        modes.resize(static_cast<std::size_t>(count(rng)));
        for (auto& m : modes) m = scale * amp(rng);
    };
    fill(p.u_modes, 1.0);
    fill(p.v_modes, 1.0);
    fill(p.n_modes, 0.5);
    fill(p.ndot_modes, 1.0);
    p.n_offset = std::numbers::pi * amp(rng);
    return p;
}

namespace {

Vector2d stress_column(const TrigProfile& p, const LeslieSet& c, double x) {
    const StressSample s = assemble_stress(p.evaluate(x), c);
    return s.sigma.col(0);
}

Vector2d central_difference(const TrigProfile& p, const LeslieSet& c, double x, double h) {
    return (stress_column(p, c, x + h) - stress_column(p, c, x - h)) / (2.0 * h);
}

}  // namespace

double check_divergence_identity(const LeslieSet& c, const TrigProfile& profile, const Grid1D& grid,
                                 double base_step) {
    const double h = base_step;
    double max_err = 0.0, max_j = 0.0;
    for (double x : grid.nodes()) {
        // Error expansion of the central difference is in even powers of h.
        const Vector2d d1 = central_difference(profile, c, x, h);
        const Vector2d d2 = central_difference(profile, c, x, h / 2);
        const Vector2d d3 = central_difference(profile, c, x, h / 4);
        const Vector2d r1 = (4.0 * d2 - d1) / 3.0;
        const Vector2d r2 = (4.0 * d3 - d2) / 3.0;
        const Vector2d lhs = (16.0 * r2 - r1) / 15.0;

        const KinematicSample s = profile.evaluate(x);
        const FluxPoint j = flux_divergence_point(c, s.n, s.n_x, s.ndot, s.ndot_x, s.u_x, s.u_xx, s.v_x, s.v_xx);
        max_err = std::max({max_err, std::abs(lhs(0) - j.f1), std::abs(lhs(1) - j.f2)});
        max_j = std::max({max_j, std::abs(j.f1), std::abs(j.f2)});
    }
    if (max_j == 0.0) return max_err;
    return max_err / max_j;
}

namespace {

Vector2d vector_director_residual(const KinematicSample& s, const LeslieSet& c) {
    const StressSample st = assemble_stress(s, c);
    const double cs = std::cos(s.n), sn = std::sin(s.n);
    const Vector2d nv(cs, sn), tau(-sn, cs);
    // Laplacian of (cos n, sin n) in x.
    const Vector2d lap = s.n_xx * tau - s.n_x * s.n_x * nv;
    // g + dW/dn - div(dW/d grad n) - lambda n, with dW/dn = 0.
    return st.g - lap - st.lambda_n;
}

double scalar_director_form(const KinematicSample& s, const LeslieSet& c, bool corrupt) {
    const double g1 = c[3] - c[2];
    const double g2 = (corrupt ? -1.0 : 1.0) * (c[6] - c[5]);
    const double cs = std::cos(s.n), sn = std::sin(s.n);
    return g1 * (s.ndot - 0.5 * s.v_x) - g2 * (s.u_x * cs * sn + 0.5 * s.v_x * (1.0 - 2.0 * cs * cs)) - s.n_xx;
}

double director_identity(const KinematicSample& s, const LeslieSet& c, bool corrupt) {
    const Vector2d r = vector_director_residual(s, c);
    return r.dot(Vector2d(-std::sin(s.n), std::cos(s.n))) - scalar_director_form(s, c, corrupt);
}

}  // namespace

double check_director_identity(const KinematicSample& s, const LeslieSet& c) {
    return director_identity(s, c, false);
}

double director_normal_component(const KinematicSample& s, const LeslieSet& c) {
    const Vector2d r = vector_director_residual(s, c);
    return r.dot(Vector2d(std::cos(s.n), std::sin(s.n)));
}

double direct_dissipation_density(double a, double b, double m, double n, const LeslieSet& c) {
    const double g1 = c[3] - c[2], g2 = c[6] - c[5];
    const DissipationMatrix A = dissipation_matrix(c, n);
    return g1 * m * m - g2 * a * m * std::sin(2 * n) - (g1 - g2 * std::cos(2 * n)) * b * m
           + A.quadratic_form(a, b);
}

std::array<double, 5> completed_squares_density(double a, double b, double m, double n, const LeslieSet& c,
                                                double isotropic_weight) {
    const double g1 = c[3] - c[2], g2 = c[6] - c[5];
    const double q = g2 * g2 / g1;
    const double c2 = std::cos(2 * n), s2 = std::sin(2 * n);
    const double cs = std::cos(n), sn = std::sin(n);
    const double sq = std::sqrt(g1) * m - (g2 * a * s2 + (g1 - g2 * c2) * b) / (2.0 * std::sqrt(g1));
    const double mix = a * cs + 0.5 * b * sn;
    return {
        sq * sq,
        (0.25 * (-c[1] - q) + isotropic_weight * (c[4] + c[7])) * a * a,
        0.25 * (2 * c[4] + c[5] + c[6] - q) * b * b,
        0.25 * (c[1] + q) * (a * c2 + b * s2) * (a * c2 + b * s2),
        (c[0] + c[1] + c[5] + c[6] + c[8]) * (mix * mix - 0.25 * b * b * sn * sn),
    };
}

double check_energy_identity(double a, double b, double m, double n, const LeslieSet& c, double isotropic_weight) {
    const auto parts = completed_squares_density(a, b, m, n, c, isotropic_weight);
    double rhs = 0.0;
    for (double p : parts) rhs += p;
    return direct_dissipation_density(a, b, m, n, c) - rhs;
}

double quadratic_form_expansion(const LeslieSet& c, double n, double y1, double y2) {
    const double g1 = c[3] - c[2], g2 = c[6] - c[5];
    const double q = g2 * g2 / g1;
    const double c2 = std::cos(2 * n), s2 = std::sin(2 * n);
    const double cs = std::cos(n), sn = std::sin(n);
    const double first = (g2 / std::sqrt(g1)) * y1 * s2 + (g1 - g2 * c2) / std::sqrt(g1) * y2;
    const double rot = y1 * c2 + y2 * s2;
    const double mix = y1 * cs + 0.5 * y2 * sn;
    return 0.25 * first * first + 0.25 * (-c[1] - q) * y1 * y1 + (c[4] + c[7]) * y1 * y1
           + 0.25 * (2 * c[4] + c[5] + c[6] - q) * y2 * y2 + 0.25 * (c[1] + q) * rot * rot
           + (c[0] + c[1] + c[5] + c[6] + c[8]) * (mix * mix - 0.25 * y2 * y2 * sn * sn);
}

namespace {

KinematicSample random_sample(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    KinematicSample s;
    s.n = angle(rng);
    s.n_x = u(rng);
    s.n_xx = u(rng);
    s.u_x = u(rng);
    s.u_xx = u(rng);
    s.v_x = u(rng);
    s.v_xx = u(rng);
    s.ndot = u(rng);
    s.ndot_x = u(rng);
    return s;
}

double coefficient_scale(const LeslieSet& c) {
    double m = 1.0;
    for (double a : c.alpha) m = std::max(m, std::abs(a));
    return m;
}

struct Accumulator {
    Accumulator(std::string name, double threshold) {
        check.name = std::move(name);
        check.threshold = threshold;
    }
    IdentityCheck check;
    void add(double residual) {
        ++check.samples;
        if (!(std::abs(residual) <= check.max_residual)) check.max_residual = std::abs(residual);
    }
    IdentityCheck finish() {
        check.passed = check.max_residual <= check.threshold;
        return check;
    }
};

}  // namespace

std::vector<IdentityCheck> run_identity_suite(const IdentitySuiteOptions& opts) {
    std::mt19937_64 rng(opts.seed);
    std::vector<LeslieSet> sets{LeslieSet::reference_example()};
    while (static_cast<int>(sets.size()) < std::max(1, opts.coefficient_sets)) sets.push_back(random_valid_set(rng));

    std::vector<IdentityCheck> out;

    {
        Accumulator acc("reference coefficient set: gamma1=2, gamma2=0, A(n)=I", 1e-14);
        const LeslieSet ref = LeslieSet::reference_example();
        const DerivedViscosities d = derive_viscosities(ref);
        acc.add(d.gamma1 - 2.0);
        acc.add(d.gamma2);
        acc.add(d.lambda_lo - 1.0);
        for (int k = 0; k < 1024; ++k) {
            const DissipationMatrix a = dissipation_matrix(ref, k * std::numbers::pi / 1024);
            acc.add(std::max({std::abs(a.a11 - 1), std::abs(a.a12), std::abs(a.a21), std::abs(a.a22 - 1)}));
        }
        out.push_back(acc.finish());
    }

    {
        Accumulator acc("divergence: d/dx sigma(:,1) = (J1, J2)", 1e-8);
        const Grid1D grid(32);
        for (const auto& c : sets) {
            for (int p = 0; p < opts.profiles; ++p) {
                acc.add(check_divergence_identity(c, TrigProfile::random(rng), grid));
            }
        }
        out.push_back(acc.finish());
    }

    Accumulator tangential("director: vector projection = scalar form", 1e-12);
    Accumulator normal("director: normal component vanishes", 1e-12);
    Accumulator energy("energy: direct = completed squares", 1e-11);
    Accumulator doubled("energy: doubled (alpha4+alpha7) leaves exactly -(alpha4+alpha7) u_x^2", 1e-11);
    Accumulator quad("quadratic form: expansion = y^T A y", 1e-12);
    Accumulator inverse("inverse: A^-1 A = I and (A^-1)_11 > 0", 1e-12);
    Accumulator ellip("ellipticity: lambda_lo <= y^T A y/|y|^2 <= lambda_hi", 1e-10);
    Accumulator nonneg("completed squares minus first >= lambda_closed (a^2+b^2)", 1e-11);
    doubled.check.note = "confirms the correct weight on (alpha4+alpha7) u_x^2 is 1";

    std::vector<DerivedViscosities> derived;
    for (const auto& c : sets) derived.push_back(derive_viscosities(c));

    for (long k = 0; k < opts.samples; ++k) {
        const std::size_t which = static_cast<std::size_t>(k) % sets.size();
        const LeslieSet& c = sets[which];
        const DerivedViscosities& d = derived[which];
        const double cscale = coefficient_scale(c);
        const KinematicSample s = random_sample(rng);

        const double dscale = cscale * (1.0 + std::abs(s.ndot) + std::abs(s.u_x) + std::abs(s.v_x) + std::abs(s.n_xx)
                                        + s.n_x * s.n_x);
        tangential.add(director_identity(s, c, opts.corrupt_director_sign) / dscale);
        normal.add(director_normal_component(s, c) / dscale);

        const double a = s.u_x, b = s.v_x, m = s.ndot;
        const double escale = cscale * (1.0 + a * a + b * b + m * m);
        energy.add(check_energy_identity(a, b, m, s.n, c) / escale);
        doubled.add((check_energy_identity(a, b, m, s.n, c, 2.0) + (c[4] + c[7]) * a * a) / escale);

        const double y2n = 1.0 + a * a + b * b;
        quad.add((quadratic_form_expansion(c, s.n, a, b) - dissipation_matrix(c, s.n).quadratic_form(a, b))
                 / (cscale * y2n));

        const DissipationMatrix A = dissipation_matrix(c, s.n);
        const DissipationMatrix Ai = inverse_dissipation_matrix(c, s.n);
        const double e11 = Ai.a11 * A.a11 + Ai.a12 * A.a21 - 1.0;
        const double e12 = Ai.a11 * A.a12 + Ai.a12 * A.a22;
        const double e21 = Ai.a21 * A.a11 + Ai.a22 * A.a21;
        const double e22 = Ai.a21 * A.a12 + Ai.a22 * A.a22 - 1.0;
        inverse.add(std::max({std::abs(e11), std::abs(e12), std::abs(e21), std::abs(e22)}));
        if (!(Ai.a11 > 0.0)) inverse.add(std::numeric_limits<double>::infinity());

        const double yy = a * a + b * b;
        if (yy > 0.0) {
            const double ray = A.quadratic_form(a, b) / yy;
            ellip.add(std::max({0.0, d.lambda_lo - ray, ray - d.lambda_hi}));
        }

        const auto parts = completed_squares_density(a, b, m, s.n, c);
        const double rest = parts[1] + parts[2] + parts[3] + parts[4];
        nonneg.add(std::max(0.0, d.lambda_closed_form * yy - rest) / escale);
    }
    for (auto* acc : {&tangential, &normal, &energy, &doubled, &quad, &inverse, &ellip, &nonneg}) {
        out.push_back(acc->finish());
    }
    return out;
}

std::string format_identity_table(const std::vector<IdentityCheck>& checks) {
    std::ostringstream os;
    os << std::left << std::setw(72) << "check" << std::right << std::setw(9) << "samples" << std::setw(14)
       << "max resid" << std::setw(11) << "threshold" << "  result\n";
    for (const auto& c : checks) {
        os << std::left << std::setw(72) << c.name << std::right << std::setw(9) << c.samples << std::setw(14)
           << std::scientific << std::setprecision(3) << c.max_residual << std::setw(11) << c.threshold
           << std::defaultfloat << (c.passed ? "  PASS" : "  FAIL") << '\n';
        if (!c.note.empty()) os << "    " << c.note << '\n';
    }
    return os.str();
}

}  // namespace leslie1d
