// sgsim command-line front end.
//
//   simulate     trajectory and packet-width series for one config
//   sweep        mass scaling or contrast sweeps, CSV per point
//   solve-loop   complete a partial config so the trajectories close
//   field-check  2D field map with force decomposition and Maxwell residuals
//
// Exit codes: 0 ok, 1 config validation failure, 2 solver failure,
// 3 integration failure.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>

#include "csv_writer.hpp"
#include "sgsim/config_io.hpp"
#include "sgsim/contrast.hpp"
#include "sgsim/fields.hpp"
#include "sgsim/integrator.hpp"
#include "sgsim/loopsolver.hpp"
#include "sgsim/trajectory.hpp"
#include "sgsim/wavepacket.hpp"

namespace fs = std::filesystem;
using namespace sgsim;
using cli::CsvWriter;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIntegration = 3;

ExperimentConfig load_validated(const fs::path& path) {
    ExperimentConfig cfg = load_config(path);
    const ValidationReport rep = validate_config(cfg);
    if (!rep.ok()) {
        std::cerr << "config validation failed:\n" << rep.to_string();
        std::exit(kExitValidation);
    }
    return cfg;
}

int cmd_simulate(const fs::path& config_path, const std::string& mode, double dt,
                 const fs::path& out_dir) {
    const ExperimentConfig cfg = load_validated(config_path);
    const std::uint64_t hash = hash_file(config_path);
    fs::create_directories(out_dir);
    const std::string cmdline = "simulate --mode " + mode;

    const bool want_analytic = mode != "numeric";
    const bool want_numeric = mode != "analytic";

    ProtocolResult analytic;
    if (want_analytic || want_numeric) analytic = run_protocol(cfg, dt);

    ProtocolTrace numeric;
    if (want_numeric) {
        try {
            numeric = integrate_protocol(cfg, +1, {});
        } catch (const IntegrationError& e) {
            std::cerr << "integration failed: " << e.what() << "\n";
            return kExitIntegration;
        }
    }

    {
        std::vector<std::string> cols = {"t",          "x_plus", "x_minus",
                                         "v_plus",     "v_minus", "separation",
                                         "velocity_difference"};
        if (mode == "both") cols.push_back("numeric_minus_analytic_separation");
        CsvWriter w(out_dir / "trajectory.csv", cmdline, hash, cols);

        // numeric samples are adaptive; resample onto the analytic grid when
        // both are requested
        std::size_t stage_i = 0;
        std::vector<double> stage_start;
        double acc = 0.0;
        for (const auto& s : analytic.stages) {
            stage_start.push_back(acc);
            acc += s.duration;
        }
        (void)stage_i;
        for (const auto& s : analytic.series) {
            if (mode == "both") {
                // locate the numeric sample nearest in time
                double best = 0.0, bestdt = 1e300;
                double t0 = 0.0;
                for (const auto& tr : numeric.stages) {
                    for (const auto& smp : tr.samples) {
                        const double t = t0 + smp[0];
                        if (std::abs(t - s.t) < bestdt) {
                            bestdt = std::abs(t - s.t);
                            best = 2.0 * smp[1];
                        }
                    }
                    t0 += tr.samples.back()[0];
                }
                w.row({s.t, s.x_plus, s.x_minus, s.v_plus, s.v_minus, s.separation,
                       s.velocity_difference, best - s.separation});
            } else if (want_analytic) {
                w.row({s.t, s.x_plus, s.x_minus, s.v_plus, s.v_minus, s.separation,
                       s.velocity_difference});
            }
        }
        if (mode == "numeric") {
            double t0 = 0.0;
            for (const auto& tr : numeric.stages) {
                for (const auto& smp : tr.samples) {
                    const double x = smp[1], v = smp[2];
                    w.row({t0 + smp[0], x, -x, v, -v, 2.0 * x, 2.0 * v});
                }
                t0 += tr.samples.back()[0];
            }
        }
    }

    {
        CsvWriter w(out_dir / "packet.csv", cmdline, hash,
                    {"t", "sigma_x", "x_c", "a", "b", "c"});
        const ChainResult chain = chain_through_protocol(cfg);
        for (const auto& s : chain.series) w.row({s.t, s.sigma_x, s.x_c, s.a, s.b, s.c});
    }

    {
        CsvWriter w(out_dir / "summary.csv", cmdline, hash, {"quantity", "value"});
        const ChainResult chain = chain_through_protocol(cfg);
        for (std::size_t i = 0; i < analytic.stages.size(); ++i) {
            const auto& s = analytic.stages[i];
            const auto end = s.end_state();
            const std::string tag = "stage" + std::to_string(s.stage_index);
            w.raw_row({tag + "_end_x", CsvWriter::num(end.x)});
            w.raw_row({tag + "_end_v", CsvWriter::num(end.v)});
            w.raw_row({tag + "_end_separation", CsvWriter::num(2.0 * std::abs(end.x))});
            if (i < chain.boundaries.size())
                w.raw_row({tag + "_end_sigma_x",
                           CsvWriter::num(chain.boundaries[i].sigma_x)});
            if (want_numeric && i < numeric.stages.size())
                w.raw_row({tag + "_energy_drift",
                           CsvWriter::num(numeric.stages[i].energy_drift)});
        }
        w.raw_row({"analytic_peak_separation", CsvWriter::num(analytic.peak.separation)});
        w.raw_row({"analytic_peak_time", CsvWriter::num(analytic.peak.t_global)});
        if (cfg.mode == ProtocolMode::FiveStage && cfg.stages.size() == 5)
            w.raw_row({"eq_max_superposition_size",
                       CsvWriter::num(max_superposition_size(cfg))});
        if (want_numeric) {
            w.raw_row({"numeric_peak_separation", CsvWriter::num(numeric.peak_separation)});
            w.raw_row({"numeric_peak_time", CsvWriter::num(numeric.peak_time)});
            w.raw_row({"numeric_final_x", CsvWriter::num(numeric.final_state.x)});
            w.raw_row({"numeric_final_v", CsvWriter::num(numeric.final_state.v)});
            w.raw_row({"max_energy_drift", CsvWriter::num(numeric.max_energy_drift)});
        }
        w.raw_row({"final_x", CsvWriter::num(analytic.final_state.x)});
        w.raw_row({"final_v", CsvWriter::num(analytic.final_state.v)});
        w.raw_row({"sigma_final", CsvWriter::num(chain.sigma_final)});
        w.raw_row({"sigma_max", CsvWriter::num(chain.sigma_max)});
    }

    std::cout << "simulate: peak separation " << analytic.peak.separation << " m at t = "
              << analytic.peak.t_global << " s\n";
    return 0;
}

int cmd_sweep(const fs::path& config_path, const std::string& axis, double lo, double hi,
              int points, const fs::path& out_dir) {
    const ExperimentConfig cfg = load_validated(config_path);
    const std::uint64_t hash = hash_file(config_path);
    fs::create_directories(out_dir);
    const std::string cmdline = "sweep --axis " + axis;

    std::vector<double> values(points);
    for (int i = 0; i < points; ++i)
        values[i] = points > 1 ? lo * std::pow(hi / lo, double(i) / (points - 1)) : lo;

    if (axis == "mass") {
        const auto pts = mass_scaling_sweep(cfg, values);
        CsvWriter w(out_dir / "sweep_mass.csv", cmdline, hash,
                    {"mass", "peak_separation"});
        for (const auto& p : pts) w.row({p.mass, p.peak_separation});
        if (pts.size() > 1) {
            const double slope = log_log_slope(pts);
            CsvWriter s(out_dir / "sweep_mass_summary.csv", cmdline, hash,
                        {"quantity", "value"});
            s.raw_row({"log_log_slope", CsvWriter::num(slope)});
            std::cout << "sweep: log-log slope " << slope << "\n";
        }
        return 0;
    }

    PerturbationAxis pa;
    if (axis == "eta-linear") pa = PerturbationAxis::LinearGradient;
    else if (axis == "eta-nonlinear") pa = PerturbationAxis::NonlinearGradient;
    else if (axis == "init-pos") pa = PerturbationAxis::InitialPosition;
    else {
        std::cerr << "unknown sweep axis: " << axis << "\n";
        return kExitValidation;
    }

    const double sign = admissible_sign(cfg, pa);
    std::vector<double> signed_values = values;
    for (auto& v : signed_values) v *= sign;
    const auto results = contrast_sweep(cfg, pa, signed_values);

    CsvWriter w(out_dir / ("sweep_" + axis + ".csv"), cmdline, hash,
                {"perturbation_value", "delta_x", "delta_b", "sigma_x_final", "contrast",
                 "error"});
    for (const auto& r : results) {
        w.raw_row({CsvWriter::num(r.perturbation.value), CsvWriter::num(r.deviations.delta_x),
                   CsvWriter::num(r.deviations.delta_b), CsvWriter::num(r.sigma_x_final),
                   CsvWriter::num(r.contrast), r.error ? *r.error : ""});
    }
    try {
        const double th = contrast_threshold(cfg, pa, 0.99, lo, hi);
        CsvWriter s(out_dir / ("sweep_" + axis + "_summary.csv"), cmdline, hash,
                    {"quantity", "value"});
        s.raw_row({"contrast_0.99_threshold", CsvWriter::num(th)});
        std::cout << "sweep: C = 0.99 at |" << axis << "| = " << th << "\n";
    } catch (const std::exception& e) {
        std::cerr << "threshold search: " << e.what() << "\n";
    }
    return 0;
}

int cmd_solve_loop(const fs::path& config_path, const fs::path& out_dir) {
    ConfigDocument doc;
    try {
        doc = load_config_document(config_path);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }
    const std::uint64_t hash = hash_file(config_path);
    fs::create_directories(out_dir);

    ClosureProblem problem;
    problem.input = doc;
    ClosureReport rep;
    try {
        rep = solve_full_closure(problem);
    } catch (const SolverError& e) {
        std::cerr << "solve-loop failed: " << e.what() << "\n";
        return kExitSolver;
    }

    save_config(out_dir / "solved.cfg", rep.solved);
    CsvWriter w(out_dir / "solve_residuals.csv", "solve-loop", hash,
                {"quantity", "value"});
    w.raw_row({"T1", CsvWriter::num(rep.T1)});
    w.raw_row({"T3_exact", CsvWriter::num(rep.T3_exact)});
    w.raw_row({"T3", CsvWriter::num(rep.T3)});
    w.raw_row({"eta4", CsvWriter::num(rep.eta4)});
    w.raw_row({"X4", CsvWriter::num(rep.X4)});
    w.raw_row({"stall_separation", CsvWriter::num(rep.stall_separation)});
    w.raw_row({"stall_separation_target", CsvWriter::num(rep.stall_separation_target)});
    w.raw_row({"eta5", CsvWriter::num(rep.eta5)});
    w.raw_row({"T5", CsvWriter::num(rep.T5)});
    w.raw_row({"final_x", CsvWriter::num(rep.final_x)});
    w.raw_row({"final_v", CsvWriter::num(rep.final_v)});
    w.raw_row({"closure_ok", rep.closure_ok ? "1" : "0"});

    std::cout << "solve-loop: T3 = " << rep.T3 << ", eta4 = " << rep.eta4
              << ", eta5 = " << rep.eta5 << ", T5 = " << rep.T5
              << ", closure " << (rep.closure_ok ? "ok" : "FAILED") << "\n";
    return rep.closure_ok ? 0 : kExitSolver;
}

int cmd_field_check(const fs::path& config_path, int stage_index, int grid_n,
                    double extent, const fs::path& out_dir) {
    const ExperimentConfig cfg = load_validated(config_path);
    const std::uint64_t hash = hash_file(config_path);
    fs::create_directories(out_dir);

    const StageSpec* st = nullptr;
    for (const auto& s : cfg.stages)
        if (s.index == stage_index) st = &s;
    if (!st) {
        std::cerr << "config has no stage " << stage_index << "\n";
        return kExitValidation;
    }

    FieldModel f;
    int spin = 0;
    if (st->kind == StageKind::Harmonic) {
        f = {FieldKind::Linear2D, st->B0, st->eta_linear};
        spin = st->spin == SpinState::SxPlusMinusOne ? 1 : 0;
    } else {
        f = {FieldKind::Nonlinear2D, st->B0, st->eta_nonlinear};
        spin = 0;
    }

    const GridSpec grid{extent, grid_n};
    const MaxwellResiduals res = maxwell_residuals(f, grid);
    const double U0 = potential_energy(f, cfg.constants, cfg.particle.mass, spin, 0.0, 0.0);

    CsvWriter w(out_dir / "field.csv", "field-check", hash,
                {"x", "y", "Bx", "By", "Fx", "Fy", "U", "dU"});
    for (int i = 0; i < grid_n; ++i) {
        const double x = grid_n > 1 ? -extent + 2.0 * extent * i / (grid_n - 1) : 0.0;
        for (int j = 0; j < grid_n; ++j) {
            const double y = grid_n > 1 ? -extent + 2.0 * extent * j / (grid_n - 1) : 0.0;
            const FieldSample b = field_at(f, x, y);
            const ForceSample fo =
                force_at(f, cfg.constants, cfg.particle.mass, spin, x, y);
            const double u = potential_energy(f, cfg.constants, cfg.particle.mass, spin, x, y);
            w.row({x, y, b.Bx, b.By, fo.force[0], fo.force[1], u, u - U0});
        }
    }
    CsvWriter s(out_dir / "field_summary.csv", "field-check", hash, {"quantity", "value"});
    s.raw_row({"max_abs_div", CsvWriter::num(res.max_abs_div)});
    s.raw_row({"max_abs_curl", CsvWriter::num(res.max_abs_curl)});
    s.raw_row({"U0_joule", CsvWriter::num(U0)});
    s.raw_row({"U0_eV", CsvWriter::num(U0 / kElementaryCharge)});

    std::cout << "field-check: max |div B| = " << res.max_abs_div << ", max |curl B| = "
              << res.max_abs_curl << ", U0 = " << U0 / kElementaryCharge << " eV\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"five-stage magnetic interferometer simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "./out";

    auto* sim = app.add_subcommand("simulate", "trajectory and packet series");
    std::string mode = "both";
    double dt = 1e-5;
    sim->add_option("config", config_path, "config file")->required();
    sim->add_option("--mode", mode, "analytic|numeric|both")
        ->check(CLI::IsMember({"analytic", "numeric", "both"}));
    sim->add_option("--dt", dt, "series sampling step in seconds");
    sim->add_option("--out", out_dir, "output directory");

    auto* sw = app.add_subcommand("sweep", "parameter sweeps");
    std::string axis = "mass";
    double lo = 1e-17, hi = 1e-14;
    int points = 13;
    sw->add_option("config", config_path, "config file")->required();
    sw->add_option("--axis", axis, "mass|eta-linear|eta-nonlinear|init-pos")->required();
    sw->add_option("--min", lo, "lower end of the sweep range");
    sw->add_option("--max", hi, "upper end of the sweep range");
    sw->add_option("--points", points, "number of log-spaced points");
    sw->add_option("--out", out_dir, "output directory");

    auto* sl = app.add_subcommand("solve-loop", "complete a partial config");
    sl->add_option("config", config_path, "partial config file")->required();
    sl->add_option("--out", out_dir, "output directory");

    auto* fc = app.add_subcommand("field-check", "2D field map and residuals");
    int stage_index = 2, grid_n = 101;
    double extent = 25e-6;
    fc->add_option("config", config_path, "config file")->required();
    fc->add_option("--stage", stage_index, "stage whose field to map");
    fc->add_option("--grid", grid_n, "points per axis");
    fc->add_option("--extent", extent, "half extent of the grid in meters");
    fc->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, mode, dt, out_dir);
        if (sw->parsed()) return cmd_sweep(config_path, axis, lo, hi, points, out_dir);
        if (sl->parsed()) return cmd_solve_loop(config_path, out_dir);
        if (fc->parsed()) return cmd_field_check(config_path, stage_index, grid_n, extent, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const SolverError& e) {
        std::cerr << e.what() << "\n";
        return kExitSolver;
    } catch (const IntegrationError& e) {
        std::cerr << e.what() << "\n";
        return kExitIntegration;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
