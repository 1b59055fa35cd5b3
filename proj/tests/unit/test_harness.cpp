#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "leslie1d/harness.hpp"

using namespace leslie1d;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("leslie1d_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kSmallShear = R"([grid]
cells = 32
[solver]
modes = 4
dt = 1e-2
t_end = 0.05
[initial]
preset = shear
[output]
directory = shear_small
snapshot_every = 2
)";

}  // namespace

TEST(Config, IniKeysLandInConfig) {
    const auto cfg = config_from_map(parse_ini(R"([coefficients]
alpha4 = 2
gamma = 1.4
[grid]
cells = 64
[solver]
scheme = fd
dt = 5e-4
limiter = minmod
[initial]
preset = smooth_random
seed = 9
)"));
    EXPECT_EQ(cfg.coefficients[4], 2.0);
    EXPECT_EQ(cfg.coefficients[2], -1.0);
    EXPECT_DOUBLE_EQ(cfg.coefficients.gamma_ad, 1.4);
    EXPECT_EQ(cfg.cells, 64);
    EXPECT_EQ(cfg.scheme, Scheme::fd);
    EXPECT_EQ(cfg.oracle.limiter, Limiter::minmod);
    EXPECT_EQ(cfg.initial.seed, 9u);
}

TEST(Config, JsonMatchesIni) {
    const auto a = config_from_map(parse_ini("[grid]\ncells = 40\n[solver]\ndt = 0.002\n[sweep]\ndeltas = 0.2, 0.1\n"));
    const auto b = config_from_map(
        parse_json_config(R"({"grid": {"cells": 40}, "solver": {"dt": 0.002}, "sweep": {"deltas": [0.2, 0.1]}})"));
    EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Config, EchoRoundTrips) {
    const auto a = config_from_map(parse_ini(kSmallShear));
    const auto b = config_from_map(parse_json_config(a.to_json().dump()));
    EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Config, RejectsBadInput) {
    EXPECT_THROW(config_from_map(parse_ini("[grid]\ncellz = 4\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_ini("[grid]\ncells = 4\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_ini("[solver]\ndt = fast\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_ini("[initial]\npreset = rough_density\n")), ConfigError);
    EXPECT_THROW(parse_json_config("{not json"), ConfigError);
    EXPECT_THROW(parse_delta_list("0.1, 0.2"), ConfigError);
}

TEST(Config, RelaxationFreezesVelocityByDefault) {
    EXPECT_TRUE(config_from_map(parse_ini("[initial]\npreset = relaxation\n")).freeze_velocity);
    EXPECT_FALSE(
        config_from_map(parse_ini("[initial]\npreset = relaxation\n[solver]\nfreeze_velocity = false\n")).freeze_velocity);
}

TEST(Config, OutputRootOverride) {
    ::setenv("LESLIE1D_OUTPUT_ROOT", "/tmp/root", 1);
    EXPECT_EQ(resolve_output_dir("a/b"), fs::path("/tmp/root/a/b"));
    EXPECT_EQ(resolve_output_dir("/abs"), fs::path("/abs"));
    ::unsetenv("LESLIE1D_OUTPUT_ROOT");
    EXPECT_EQ(resolve_output_dir("a"), fs::path("a"));
}

TEST(Mollify, ConstantsStayConstantInside) {
    const Grid1D g(200);
    RawInitialData raw;
    raw.rho0.assign(201, 1.0);
    raw.m0.assign(201, 0.0);
    raw.l0.assign(201, 0.0);
    raw.n0.assign(201, 0.7);
    const double delta = 0.05;
    const auto s = mollify_initial_data(raw, delta, g);
    for (int i = 0; i <= 200; ++i) {
        const auto k = static_cast<std::size_t>(i);
        if (g.x(i) > delta && g.x(i) < 1 - delta) EXPECT_NEAR(s.rho[k], 1 + delta, 1e-13);
        EXPECT_GE(s.rho[k], delta);
        EXPECT_EQ(s.u[k], 0.0);
        EXPECT_EQ(s.v[k], 0.0);
        EXPECT_NEAR(s.n[k], 0.7, 1e-13);
    }
}

TEST(Mollify, EvenReflectionKeepsNeumannData) {
    const Grid1D g(400);
    std::vector<double> f(401);
    for (int i = 0; i <= 400; ++i) f[static_cast<std::size_t>(i)] = std::cos(pi * g.x(i));
    const auto m = mollify_even_extension(f, 0.05, g);
    // Convolution of cos with a symmetric kernel scales it by a constant factor.
    const double factor = m[0] / f[0];
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(m[i], factor * f[i], 1e-12);
    EXPECT_GT(factor, 0.99);
}

TEST(Mollify, VacuumPatchConverges) {
    const Grid1D g(4096);
    InitialSpec spec;
    spec.preset = "rough_density";
    spec.profile = "vacuum_patch";
    const auto raw = raw_initial_data(spec, g);
    double prev = 1e300;
    for (double delta : {0.1, 0.05, 0.025, 0.0125}) {
        const auto e = initial_data_errors(raw, delta, 2.0, g);
        EXPECT_GE(e.min_rho, delta * (1 - 1e-12));
        EXPECT_LT(e.rho_Lgamma, prev);
        prev = e.rho_Lgamma;
    }
}

TEST(Mollify, SmoothDensityMomentumConverges) {
    const Grid1D g(4096);
    InitialSpec spec;
    spec.preset = "smooth_random";
    spec.seed = 3;
    const auto raw = raw_initial_data(spec, g);
    std::vector<double> ds, es;
    for (double delta : {0.1, 0.05, 0.025, 0.0125}) {
        const auto e = initial_data_errors(raw, delta, 2.0, g);
        ds.push_back(delta);
        es.push_back(e.sqrt_rho_u_L2 + e.sqrt_rho_v_L2);
    }
    for (std::size_t k = 1; k < es.size(); ++k) EXPECT_LT(es[k], es[k - 1]);
    EXPECT_GT(fitted_order(ds, es), 0.4);
}

TEST(Mollify, FittedOrderOfPowerLaw) {
    const std::vector<double> d{0.1, 0.05, 0.025}, e{3e-2, 7.5e-3, 1.875e-3};
    EXPECT_NEAR(fitted_order(d, e), 2.0, 1e-12);
}

TEST(Sweep, SeriesDistanceInterpolates) {
    TimeSeries a{{0, 1, 2}, {0, 1, 2}}, b{{0, 2}, {0, 3}};
    EXPECT_NEAR(series_distance(a, b), 1.0, 1e-15);
}

TEST(Run, StaticPresetHasNoDefect) {
    auto cfg = config_from_map(parse_ini("[grid]\ncells = 32\n[solver]\nmodes = 4\ndt = 0.01\nt_end = 0.1\n"
                                         "[initial]\npreset = static\n"));
    const auto out = execute_run(cfg);
    EXPECT_LE(out.budget.max_abs_defect, 1e-12);
    EXPECT_TRUE(out.energy_monotone);
}

TEST(Run, CommandWritesFilesDeterministically) {
    const fs::path dir = scratch_dir("run");
    const fs::path cfg = write_file(dir / "shear.ini", kSmallShear);
    ::setenv("LESLIE1D_OUTPUT_ROOT", (dir / "a").c_str(), 1);
    std::ostringstream out, err;
    ASSERT_EQ(run_command(cfg, out, err), 0) << err.str();
    ::setenv("LESLIE1D_OUTPUT_ROOT", (dir / "b").c_str(), 1);
    ASSERT_EQ(run_command(cfg, out, err), 0) << err.str();
    ::unsetenv("LESLIE1D_OUTPUT_ROOT");

    const fs::path a = dir / "a" / "shear_small", b = dir / "b" / "shear_small";
    const std::string energy = read_file(a / "energy.csv");
    EXPECT_EQ(energy.substr(0, energy.find('\n')),
              "time,kinetic,internal,elastic,total,D_total,D_1,D_2,D_3,D_4,D_5,mass,entropy,rho2gamma");
    EXPECT_EQ(energy, read_file(b / "energy.csv"));
    EXPECT_TRUE(fs::exists(a / "fields_0000.csv"));
    EXPECT_TRUE(fs::exists(a / "fields_0003.csv"));
    EXPECT_EQ(read_file(a / "fields_0003.csv"), read_file(b / "fields_0003.csv"));
    EXPECT_EQ(read_file(a / "fields_0000.csv").substr(0, 11), "x,rho,u,v,n");

    const auto summary = nlohmann::json::parse(read_file(a / "summary.json"));
    EXPECT_EQ(summary["settings"]["grid"]["cells"], 32);
    EXPECT_EQ(summary["settings"]["initial"]["preset"], "shear");
    EXPECT_TRUE(summary["energy_monotone"].get<bool>());
}

TEST(Run, InvalidCoefficientsNameTheInequality) {
    const fs::path dir = scratch_dir("invalid");
    const fs::path cfg = write_file(dir / "bad.ini", "[coefficients]\nalpha4 = -1\n");
    std::ostringstream out, err;
    EXPECT_EQ(run_command(cfg, out, err), 2);
    EXPECT_NE(err.str().find("alpha4 > 0"), std::string::npos);
    EXPECT_EQ(validate_coefficients_command(cfg, true, out, err), 1);
    EXPECT_NE(out.str().find("\"first_failure\": \"alpha4 > 0\""), std::string::npos);
}

TEST(Run, MissingConfigIsAnError) {
    std::ostringstream out, err;
    EXPECT_EQ(run_command("/nonexistent/config.ini", out, err), 2);
}

TEST(Sweep, ConstantDataMovesLittle) {
    auto cfg = config_from_map(parse_ini("[grid]\ncells = 64\n[solver]\nmodes = 4\ndt = 0.01\nt_end = 0.05\n"
                                         "[initial]\npreset = static\n[sweep]\ninitial_check_cells = 512\n"));
    const std::vector<double> deltas{0.1, 0.05, 0.025};
    const auto r = run_sweep(cfg, deltas, std::nullopt, 2);
    ASSERT_FALSE(r.aborted);
    ASSERT_EQ(r.members.size(), 3u);
    for (std::size_t k = 0; k + 1 < deltas.size(); ++k) EXPECT_LE(r.cauchy.at("energy")[k], 4 * deltas[k]);
}

TEST(Sweep, WritesReport) {
    const fs::path dir = scratch_dir("sweep");
    auto cfg = config_from_map(parse_ini("[grid]\ncells = 64\n[solver]\nmodes = 4\ndt = 0.01\nt_end = 0.03\n"
                                         "[initial]\npreset = rough_density\nmollify_delta = 0.1\n"
                                         "[sweep]\ninitial_check_cells = 512\n"));
    const auto r = run_sweep(cfg, {0.2, 0.1}, dir, 2);
    EXPECT_TRUE(fs::exists(dir / "sweep.json"));
    EXPECT_TRUE(fs::exists(dir / "delta_0_0.2" / "energy.csv"));
    const auto j = nlohmann::json::parse(read_file(dir / "sweep.json"));
    EXPECT_EQ(j["members"].size(), 2u);
    EXPECT_TRUE(j.contains("inconclusive"));
    EXPECT_EQ(r.cauchy.at("entropy").size(), 1u);
}

TEST(Verify, SmallSuitePasses) {
    std::ostringstream out;
    EXPECT_EQ(verify_command(5, 500, out), 0) << out.str();
}
