#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "leslie1d/diagnostics.hpp"
#include "leslie1d/galerkin.hpp"
#include "leslie1d/tridiagonal.hpp"

using namespace leslie1d;
using std::numbers::pi;

namespace {

FlowState uniform(const Grid1D& g) {
    const auto m = static_cast<std::size_t>(g.num_nodes());
    FlowState s;
    s.rho.assign(m, 1.0);
    s.u.assign(m, 0.0);
    s.v.assign(m, 0.0);
    s.n.assign(m, 0.0);
    s.ndot = std::vector<double>(m, 0.0);
    return s;
}

}  // namespace

TEST(Tridiagonal, SolvesKnownSystem) {
    const std::vector<double> lo{0, -1, -1, -1}, di{2, 2, 2, 2}, up{-1, -1, -1, 0};
    const std::vector<double> x{1, 2, 3, 4};
    std::vector<double> b(4);
    for (std::size_t i = 0; i < 4; ++i) {
        b[i] = di[i] * x[i] + (i > 0 ? lo[i] * x[i - 1] : 0) + (i < 3 ? up[i] * x[i + 1] : 0);
    }
    const auto r = solve_tridiagonal(lo, di, up, b);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(r[i], x[i], 1e-14);
}

TEST(Tridiagonal, BlockSolveMatchesDense) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    const int n = 6;
    std::vector<Eigen::Matrix2d> lo(n), di(n), up(n);
    std::vector<Eigen::Vector2d> rhs(n);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    Eigen::VectorXd b(2 * n);
    for (int i = 0; i < n; ++i) {
        lo[i] = Eigen::Matrix2d::NullaryExpr([&] { return u(rng); });
        up[i] = Eigen::Matrix2d::NullaryExpr([&] { return u(rng); });
        di[i] = Eigen::Matrix2d::NullaryExpr([&] { return u(rng); }) + 6 * Eigen::Matrix2d::Identity();
        rhs[i] = Eigen::Vector2d(u(rng), u(rng));
        dense.block(2 * i, 2 * i, 2, 2) = di[i];
        if (i > 0) dense.block(2 * i, 2 * i - 2, 2, 2) = lo[i];
        if (i + 1 < n) dense.block(2 * i, 2 * i + 2, 2, 2) = up[i];
        b.segment(2 * i, 2) = rhs[i];
    }
    const Eigen::VectorXd ref = dense.partialPivLu().solve(b);
    const auto x = solve_block_tridiagonal(lo, di, up, rhs);
    for (int i = 0; i < n; ++i) EXPECT_LT((x[i] - ref.segment(2 * i, 2)).norm(), 1e-12);
}

TEST(Energy, UniformRestState) {
    const Grid1D g(64);
    const auto e = energy(uniform(g), 2.0, g);
    EXPECT_NEAR(e.kinetic, 0.0, 1e-15);
    EXPECT_NEAR(e.internal, 1.0, 1e-14);
    EXPECT_NEAR(e.elastic, 0.0, 1e-15);
    EXPECT_NEAR(e.total, 1.0, 1e-14);
}

TEST(Energy, ShearKinetic) {
    const Grid1D g(64);
    auto s = uniform(g);
    for (int i = 0; i < g.num_nodes(); ++i) s.v[static_cast<std::size_t>(i)] = std::sin(pi * g.x(i));
    EXPECT_NEAR(energy(s, 2.0, g).total, 1.25, 1e-12);
}

TEST(Energy, ElasticCosine) {
    const Grid1D g(256);
    auto s = uniform(g);
    for (int i = 0; i < g.num_nodes(); ++i) s.n[static_cast<std::size_t>(i)] = std::cos(pi * g.x(i));
    EXPECT_NEAR(energy(s, 2.0, g).elastic, pi * pi / 4, 1e-4);
}

TEST(Dissipation, RestStateIsZero) {
    const Grid1D g(32);
    const auto c = LeslieSet::reference_example();
    const auto d = dissipation(uniform(g), c, derive_viscosities(c), g);
    EXPECT_NEAR(d.total, 0.0, 1e-15);
}

TEST(Dissipation, CompletedSquaresMatchDirectForm) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    const Grid1D g(64);
    for (int trial = 0; trial < 20; ++trial) {
        const LeslieSet c = random_valid_set(rng);
        auto s = uniform(g);
        const double a = u(rng), b = u(rng), p = u(rng), q = u(rng);
        for (int i = 0; i < g.num_nodes(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            const double x = g.x(i);
            s.u[k] = a * std::sin(pi * x);
            s.v[k] = b * std::sin(2 * pi * x);
            s.n[k] = p * std::cos(pi * x);
            (*s.ndot)[k] = q * std::cos(3 * x);
        }
        const double direct = dissipation_direct(s, c, g);
        const auto split = dissipation(s, c, derive_viscosities(c), g);
        EXPECT_NEAR(split.total, direct, 1e-11 * (1 + std::abs(direct)));
        EXPECT_GE(split.total, -1e-12);
    }
}

TEST(Budget, StaticSeriesHasNoDefect) {
    std::vector<EnergyLedger> ledger(5);
    for (int k = 0; k < 5; ++k) {
        ledger[static_cast<std::size_t>(k)].time = 0.1 * k;
        ledger[static_cast<std::size_t>(k)].total = 2.0;
    }
    const auto r = energy_budget(ledger);
    EXPECT_EQ(r.max_abs_defect, 0.0);
    EXPECT_EQ(r.max_step_increase, 0.0);
}

TEST(Budget, ExactDecayHasSmallDefect) {
    // E = exp(-t), D = exp(-t): defect is the quadrature error of the rectangle rule.
    std::vector<EnergyLedger> ledger;
    for (int k = 0; k <= 100; ++k) {
        EnergyLedger e;
        e.time = 0.01 * k;
        e.total = std::exp(-e.time);
        e.dissipation = std::exp(-e.time);
        ledger.push_back(e);
    }
    const auto r = energy_budget(ledger);
    EXPECT_LT(r.max_abs_defect, 0.01);
    EXPECT_GT(r.max_abs_defect, 0.001);
    EXPECT_LE(r.max_step_increase, 0.0);
}

TEST(Integrability, TrapezoidInTime) {
    std::vector<EnergyLedger> ledger(3);
    for (int k = 0; k < 3; ++k) {
        ledger[static_cast<std::size_t>(k)].time = 0.5 * k;
        ledger[static_cast<std::size_t>(k)].rho_L2gamma_increment = 4.0;
    }
    EXPECT_NEAR(high_integrability(ledger), 4.0, 1e-15);
    ledger[2].time = 0.25;
    EXPECT_NEAR(high_integrability(ledger), 1.0, 1e-15);
}

TEST(Entropy, Examples) {
    const Grid1D g(32);
    auto s = uniform(g);
    EXPECT_NEAR(entropy_like(s, g), 0.0, 1e-15);
    s.rho.assign(s.size(), std::exp(1.0));
    EXPECT_NEAR(entropy_like(s, g), std::exp(1.0), 1e-13);
    s.rho[3] = 0.0;
    EXPECT_TRUE(std::isfinite(entropy_like(s, g)));
}

TEST(Entropy, JensenLowerBound) {
    // int rho log rho >= M log M on a unit interval.
    const Grid1D g(64);
    auto s = uniform(g);
    for (int i = 0; i < g.num_nodes(); ++i) s.rho[static_cast<std::size_t>(i)] = 1.0 + 0.8 * std::sin(5 * g.x(i));
    const double m = g.integrate(s.rho);
    EXPECT_GE(entropy_like(s, g), m * std::log(m));
}

TEST(EffectiveFlux, IdentityMatrixExample) {
    const Grid1D g(32);
    const auto c = LeslieSet::reference_example();
    auto s = uniform(g);
    const auto h = effective_viscous_flux(s, c, g);
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_NEAR(h.h1[i], -1.0, 1e-14);
        EXPECT_NEAR(h.h2[i], 0.0, 1e-14);
    }
    s.rho.assign(s.size(), 0.0);
    const auto hv = effective_viscous_flux(s, c, g);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(hv.h1[i], 0.0, 1e-14);
}

TEST(EffectiveFlux, WindowIsCompactlySupported) {
    EXPECT_EQ(pairing_window(0.0), 0.0);
    EXPECT_EQ(pairing_window(1.0), 0.0);
    EXPECT_EQ(pairing_window(0.02), 0.0);
    EXPECT_GT(pairing_window(0.5), 0.0);
}

TEST(DirectorNorms, RelaxationMatchesHeatFlow) {
    // Reference set: gamma1 = 2, n = exp(-pi^2 t/2) cos(pi x), so int_0^T int n_xx^2 = pi^2/2 (1 - exp(-pi^2 T)).
    const Grid1D g(128);
    SolverConfig cfg;
    cfg.dt = 5e-4;
    cfg.freeze_velocity = true;
    GalerkinSolver solver(g, LeslieSet::reference_example(), 4, cfg);
    auto s = uniform(g);
    s.ndot.reset();
    for (int i = 0; i < g.num_nodes(); ++i) s.n[static_cast<std::size_t>(i)] = std::cos(pi * g.x(i));
    const double t_end = 0.2;
    const auto tr = solver.run(s, t_end);
    const double exact = std::sqrt(pi * pi / 2 * (1 - std::exp(-pi * pi * t_end)));
    EXPECT_NEAR(director_norms(tr.ledger).nxx / exact, 1.0, 0.02);
}

TEST(Dissipation, HandEvaluatedShearExample) {
    // Reference set, u = 0, v_x = 1, ndot = 1/2: only the v_x^2 term with weight (2 alpha4+alpha5+alpha6)/4 survives.
    const Grid1D g(32);
    const auto c = LeslieSet::reference_example();
    auto s = uniform(g);
    s.ux = std::vector<double>(s.size(), 0.0);
    s.vx = std::vector<double>(s.size(), 1.0);
    s.ndot = std::vector<double>(s.size(), 0.5);
    const auto d = dissipation(s, c, derive_viscosities(c), g);
    EXPECT_NEAR(d.total, 0.5, 1e-14);
    EXPECT_NEAR(dissipation_direct(s, c, g), 0.5, 1e-14);
}

TEST(DirectorNorms, StaticRunIsZero) {
    const Grid1D g(32);
    GalerkinSolver solver(g, LeslieSet::reference_example(), 4, {.dt = 1e-2});
    auto s = uniform(g);
    s.ndot.reset();
    const auto n = director_norms(solver.run(s, 0.1).ledger);
    EXPECT_NEAR(n.nxx, 0.0, 1e-14);
    EXPECT_NEAR(n.nt, 0.0, 1e-14);
}
