#include "leslie1d/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "leslie1d/derivation.hpp"
#include "leslie1d/fd_oracle.hpp"
#include "leslie1d/galerkin.hpp"

namespace leslie1d {

namespace fs = std::filesystem;

namespace {

nlohmann::json ledger_json(const EnergyLedger& e) {
    return {{"time", e.time},       {"kinetic", e.kinetic},
            {"internal", e.internal}, {"elastic", e.elastic},
            {"total", e.total},     {"D_total", e.dissipation},
            {"D_parts", e.dissipation_parts}, {"mass", e.mass},
            {"entropy", e.entropy}, {"rho2gamma", e.rho_L2gamma_increment}};
}

nlohmann::json stats_json(const SolverStats& s) {
    return {{"steps", s.steps},
            {"picard_iterations_total", s.picard_iterations_total},
            {"picard_iterations_max", s.picard_iterations_max},
            {"dt_halvings", s.dt_halvings},
            {"min_dt", s.min_dt},
            {"max_step_mass_change", s.max_step_mass_change},
            {"min_rho", s.min_rho},
            {"max_rho", s.max_rho},
            {"density_bound_flagged", s.density_bound_flagged},
            {"mass", s.mass_scale}};
}

void write_energy_csv(const std::vector<EnergyLedger>& ledger, const fs::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "time,kinetic,internal,elastic,total,D_total,D_1,D_2,D_3,D_4,D_5,mass,entropy,rho2gamma\n";
    out << std::setprecision(17);
    for (const auto& e : ledger) {
        out << e.time << ',' << e.kinetic << ',' << e.internal << ',' << e.elastic << ',' << e.total << ','
            << e.dissipation;
        for (double d : e.dissipation_parts) out << ',' << d;
        out << ',' << e.mass << ',' << e.entropy << ',' << e.rho_L2gamma_increment << '\n';
    }
}

void write_fields_csv(const FlowState& s, const Grid1D& grid, const fs::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << "x,rho,u,v,n\n" << std::setprecision(17);
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << grid.x(static_cast<int>(i)) << ',' << s.rho[i] << ',' << s.u[i] << ',' << s.v[i] << ',' << s.n[i]
            << '\n';
    }
}

double interpolate(const TimeSeries& s, double t) {
    if (s.t.empty()) return 0.0;
    if (t <= s.t.front()) return s.value.front();
    if (t >= s.t.back()) return s.value.back();
    const auto it = std::upper_bound(s.t.begin(), s.t.end(), t);
    const auto k = static_cast<std::size_t>(it - s.t.begin());
    const double w = (t - s.t[k - 1]) / (s.t[k] - s.t[k - 1]);
    return (1.0 - w) * s.value[k - 1] + w * s.value[k];
}

std::string delta_dir_name(std::size_t index, double delta) {
    std::ostringstream os;
    os << "delta_" << index << "_" << std::setprecision(6) << delta;
    return os.str();
}

SweepMember summarize_member(const RunConfig& cfg, const RunOutcome& out, double delta) {
    const Grid1D grid(cfg.cells);
    SweepMember m;
    m.delta = delta;
    m.final_energy = out.trajectory.ledger.back().total;
    m.max_defect = out.budget.max_abs_defect;
    m.rho2gamma_integral = out.rho2gamma_integral;
    m.energy_monotone = out.energy_monotone;
    for (const auto& e : out.trajectory.ledger) {
        m.energy.t.push_back(e.time);
        m.energy.value.push_back(e.total);
        m.entropy.t.push_back(e.time);
        m.entropy.value.push_back(e.entropy);
    }
    for (const auto& s : out.trajectory.snapshots) {
        const auto p = windowed_flux_pairing(s, cfg.coefficients, grid);
        m.pairing_u.t.push_back(s.time);
        m.pairing_u.value.push_back(p[0]);
        m.pairing_v.t.push_back(s.time);
        m.pairing_v.value.push_back(p[1]);
    }
    return m;
}

}  // namespace

RunOutcome execute_run(const RunConfig& cfg) {
    cfg.check();
    derive_viscosities(cfg.coefficients);  // throws InvalidCoefficients
    const Grid1D grid(cfg.cells);
    const FlowState initial = build_initial_state(cfg, grid);

    RunOutcome out;
    if (cfg.scheme == Scheme::galerkin) {
        SolverConfig sc;
        sc.dt = cfg.dt;
        sc.picard_tol = cfg.picard_tol;
        sc.picard_max = cfg.picard_max;
        sc.freeze_velocity = cfg.freeze_velocity;
        const GalerkinSolver solver(grid, cfg.coefficients, cfg.modes, sc);
        out.trajectory = solver.run(initial, cfg.t_end, cfg.snapshot_every);
    } else {
        out.trajectory = run_fd(initial, cfg.coefficients, grid, cfg.dt, cfg.t_end, cfg.oracle, cfg.snapshot_every);
    }
    const auto& ledger = out.trajectory.ledger;
    out.budget = energy_budget(ledger);
    out.rho2gamma_integral = high_integrability(ledger);
    out.director = director_norms(ledger);
    out.energy_monotone = out.budget.max_step_increase <= cfg.energy_tol;
    return out;
}

nlohmann::json summary_json(const RunConfig& cfg, const RunOutcome& out) {
    const auto& tr = out.trajectory;
    return {{"settings", cfg.to_json()},
            {"final", ledger_json(tr.ledger.back())},
            {"initial", ledger_json(tr.ledger.front())},
            {"max_defect", out.budget.max_abs_defect},
            {"max_step_energy_increase", out.budget.max_step_increase},
            {"max_energy_increase_over_initial", out.budget.max_increase_over_initial},
            {"energy_monotone", out.energy_monotone},
            {"rho2gamma_spacetime", out.rho2gamma_integral},
            {"norm_nxx_L2L2", out.director.nxx},
            {"norm_nt_L2L2", out.director.nt},
            {"snapshots", tr.snapshots.size()},
            {"stats", stats_json(tr.stats)}};
}

void write_run_outputs(const RunConfig& cfg, const RunOutcome& out, const fs::path& dir) {
    fs::create_directories(dir);
    const Grid1D grid(cfg.cells);
    write_energy_csv(out.trajectory.ledger, dir / "energy.csv");
    for (std::size_t k = 0; k < out.trajectory.snapshots.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "fields_%04zu.csv", k);
        write_fields_csv(out.trajectory.snapshots[k], grid, dir / name);
    }
    std::ofstream(dir / "summary.json") << summary_json(cfg, out).dump(2) << '\n';
}

double series_distance(const TimeSeries& a, const TimeSeries& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.t.size(); ++k) d = std::max(d, std::abs(a.value[k] - interpolate(b, a.t[k])));
    return d;
}

SweepReport run_sweep(const RunConfig& cfg, const std::vector<double>& deltas,
                      const std::optional<fs::path>& out_dir, unsigned threads) {
    if (deltas.empty()) throw ConfigError("sweep needs at least one delta");
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0)) throw ConfigError("deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1])) throw ConfigError("deltas must be strictly decreasing");
    }
    derive_viscosities(cfg.coefficients);

    RunConfig base = cfg;
    if (base.snapshot_every == 0) {
        const auto steps = static_cast<long>(std::ceil(base.t_end / base.dt));
        base.snapshot_every = static_cast<int>(std::max<long>(1, steps / 20));
    }

    SweepReport report;
    report.deltas = deltas;
    const std::size_t n = deltas.size();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

    // Worker pool: each member owns its solver; results land in per-index slots.
    std::vector<std::optional<SweepMember>> slots(n);
    std::vector<std::string> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                RunConfig member = base;
                member.mollify_delta = deltas[k];
                const RunOutcome out = execute_run(member);
                if (out_dir) write_run_outputs(member, out, *out_dir / delta_dir_name(k, deltas[k]));
                slots[k] = summarize_member(member, out, deltas[k]);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, n); ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    for (std::size_t k = 0; k < n; ++k) {
        if (!errors[k].empty() && !report.aborted) {
            std::ostringstream os;
            os << "run for delta=" << deltas[k] << " failed: " << errors[k];
            report.aborted = os.str();
        }
        if (slots[k] && !report.aborted) report.members.push_back(*slots[k]);
    }

    // Initial-data distances on a fine grid shared by all deltas.
    const Grid1D fine(cfg.initial_check_cells);
    const RawInitialData raw = raw_initial_data(cfg.initial, fine);
    std::map<std::string, std::vector<double>> errs;
    for (std::size_t k = 0; k < report.members.size(); ++k) {
        auto& m = report.members[k];
        m.initial = initial_data_errors(raw, m.delta, cfg.coefficients.gamma_ad, fine);
        errs["rho_Lgamma"].push_back(m.initial.rho_Lgamma);
        errs["n_H1"].push_back(m.initial.n_H1);
        errs["sqrt_rho_u_L2"].push_back(m.initial.sqrt_rho_u_L2);
        errs["sqrt_rho_v_L2"].push_back(m.initial.sqrt_rho_v_L2);
        errs["rho_u_Lp"].push_back(m.initial.rho_u_Lp);
        errs["rho_v_Lp"].push_back(m.initial.rho_v_Lp);
    }
    const std::size_t done = report.members.size();
    if (done >= 2) {
        std::vector<double> ds(deltas.begin(), deltas.begin() + static_cast<std::ptrdiff_t>(done));
        for (const auto& [name, e] : errs) {
            const bool usable = std::all_of(e.begin(), e.end(), [](double v) { return v > 0.0; });
            report.initial_order_fit[name] = usable ? fitted_order(ds, e) : 0.0;
            report.initial_order_finest[name] =
                usable ? std::log(e[done - 2] / e[done - 1]) / std::log(ds[done - 2] / ds[done - 1]) : 0.0;
        }
        for (std::size_t k = 0; k + 1 < done; ++k) {
            const auto& a = report.members[k];
            const auto& b = report.members[k + 1];
            report.cauchy["entropy"].push_back(series_distance(a.entropy, b.entropy));
            report.cauchy["energy"].push_back(series_distance(a.energy, b.energy));
            report.cauchy["rho2gamma"].push_back(std::abs(a.rho2gamma_integral - b.rho2gamma_integral));
            report.cauchy["pairing_u"].push_back(series_distance(a.pairing_u, b.pairing_u));
            report.cauchy["pairing_v"].push_back(series_distance(a.pairing_v, b.pairing_v));
        }
        for (const auto& [name, c] : report.cauchy) {
            bool dec = true;
            for (std::size_t k = 1; k < c.size(); ++k) dec = dec && c[k] < c[k - 1];
            report.cauchy_decreasing[name] = dec;
            report.inconclusive = report.inconclusive || !dec;
        }
    }
    if (done > 0) {
        double lo = report.members.front().rho2gamma_integral, hi = lo;
        for (const auto& m : report.members) {
            lo = std::min(lo, m.rho2gamma_integral);
            hi = std::max(hi, m.rho2gamma_integral);
        }
        report.rho2gamma_spread = lo > 0.0 ? hi / lo : 0.0;
    }

    if (out_dir) {
        fs::create_directories(*out_dir);
        nlohmann::json j = sweep_json(report);
        j["settings"] = cfg.to_json();
        std::ofstream(*out_dir / "sweep.json") << j.dump(2) << '\n';
    }
    return report;
}

nlohmann::json sweep_json(const SweepReport& r) {
    nlohmann::json j;
    j["deltas"] = r.deltas;
    j["members"] = nlohmann::json::array();
    for (const auto& m : r.members) {
        j["members"].push_back({{"delta", m.delta},
                                {"final_energy", m.final_energy},
                                {"max_defect", m.max_defect},
                                {"rho2gamma_spacetime", m.rho2gamma_integral},
                                {"energy_monotone", m.energy_monotone},
                                {"entropy_series", {{"t", m.entropy.t}, {"value", m.entropy.value}}},
                                {"pairing_series",
                                 {{"t", m.pairing_u.t}, {"u", m.pairing_u.value}, {"v", m.pairing_v.value}}},
                                {"initial_data_errors",
                                 {{"rho_Lgamma", m.initial.rho_Lgamma},
                                  {"n_H1", m.initial.n_H1},
                                  {"sqrt_rho_u_L2", m.initial.sqrt_rho_u_L2},
                                  {"sqrt_rho_v_L2", m.initial.sqrt_rho_v_L2},
                                  {"rho_u_Lp", m.initial.rho_u_Lp},
                                  {"rho_v_Lp", m.initial.rho_v_Lp},
                                  {"min_rho", m.initial.min_rho}}}});
    }
    j["cauchy"] = r.cauchy;
    j["cauchy_decreasing"] = r.cauchy_decreasing;
    j["inconclusive"] = r.inconclusive;
    j["rho2gamma_spread"] = r.rho2gamma_spread;
    j["initial_order_fit"] = r.initial_order_fit;
    j["initial_order_finest_pair"] = r.initial_order_finest;
    j["aborted"] = r.aborted ? nlohmann::json(*r.aborted) : nlohmann::json(nullptr);
    return j;
}

int run_command(const fs::path& config, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_config(config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    try {
        const RunOutcome res = execute_run(cfg);
        const fs::path dir = resolve_output_dir(cfg.output_dir);
        write_run_outputs(cfg, res, dir);
        const auto& last = res.trajectory.ledger.back();
        out << "run finished: t=" << last.time << " steps=" << res.trajectory.stats.steps
            << " E0=" << res.trajectory.ledger.front().total << " E=" << last.total
            << " max_defect=" << res.budget.max_abs_defect << " monotone=" << (res.energy_monotone ? "yes" : "no")
            << "\noutputs in " << dir.string() << '\n';
        return 0;
    } catch (const InvalidCoefficients& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "solver abort: " << e.what() << '\n';
        return 1;
    }
}

int sweep_command(const fs::path& config, const std::optional<std::vector<double>>& deltas, std::ostream& out,
                  std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_config(config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    try {
        const fs::path dir = resolve_output_dir(cfg.output_dir);
        const SweepReport r = run_sweep(cfg, deltas.value_or(cfg.sweep_deltas), dir);
        out << std::setprecision(6);
        for (const auto& m : r.members) {
            out << "delta=" << m.delta << " E_final=" << m.final_energy << " rho2gamma=" << m.rho2gamma_integral
                << " max_defect=" << m.max_defect << '\n';
        }
        for (const auto& [name, dec] : r.cauchy_decreasing) {
            out << "cauchy " << name << (dec ? " decreasing" : " not decreasing") << '\n';
        }
        out << "rho2gamma spread " << r.rho2gamma_spread << (r.inconclusive ? "\nreport inconclusive" : "")
            << "\nsweep report in " << (dir / "sweep.json").string() << '\n';
        if (r.aborted) {
            err << "sweep aborted: " << *r.aborted << '\n';
            return 1;
        }
        return 0;
    } catch (const InvalidCoefficients& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

int verify_command(std::uint64_t seed, long samples, std::ostream& out) {
    IdentitySuiteOptions opts;
    opts.seed = seed;
    opts.samples = samples;
    const auto checks = run_identity_suite(opts);
    out << format_identity_table(checks);
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.passed; });
    out << (ok ? "all identities within tolerance\n" : "identity suite FAILED\n");
    return ok ? 0 : 1;
}

int validate_coefficients_command(const fs::path& config, bool json, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_config(config);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    const ValidationReport r = validate(cfg.coefficients);
    if (json) {
        nlohmann::json j;
        j["valid"] = r.valid;
        j["checks"] = nlohmann::json::array();
        for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"margin", c.margin}});
        if (r.valid) {
            const auto d = derive_viscosities(cfg.coefficients);
            j["gamma1"] = d.gamma1;
            j["gamma2"] = d.gamma2;
            j["lambda_lo"] = d.lambda_lo;
            j["lambda_hi"] = d.lambda_hi;
        } else {
            j["first_failure"] = r.first_failure();
        }
        out << j.dump(2) << '\n';
    } else {
        out << r.to_text();
        if (r.valid) {
            const auto d = derive_viscosities(cfg.coefficients);
            out << "gamma1 = " << d.gamma1 << "\ngamma2 = " << d.gamma2 << "\nlambda in [" << d.lambda_lo << ", "
                << d.lambda_hi << "]\n";
        }
    }
    return r.valid ? 0 : 1;
}

}  // namespace leslie1d
