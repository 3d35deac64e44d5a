#include "sgsim/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sgsim {

double accel_exact(const PhysicalConstants& c, const StageSpec& stage, double mass,
                   int spin, double x, DynamicsModel dynamics) {
    if (stage.kind == StageKind::Harmonic) {
        const double w = omega_harmonic(c, stage.eta_linear);
        const bool force_on = stage.spin == SpinState::SxPlusMinusOne &&
                              !(dynamics == DynamicsModel::QuadraticIhp && stage.index == 3);
        double a = -w * w * x;
        if (force_on) a -= spin * c.hbar * c.gamma_e * stage.eta_linear / mass;
        return a;
    }
    const double w = omega_inverted(c, stage.B0, stage.eta_nonlinear);
    double a = w * w * x;
    if (dynamics == DynamicsModel::FullPotential) {
        // quartic correction from the eta_n^2 x^4 part of the potential
        a += 2.0 * c.chi_rho / c.mu0 * stage.eta_nonlinear * stage.eta_nonlinear * x * x * x;
    }
    return a;
}

double stage_energy(const PhysicalConstants& c, const StageSpec& stage, double mass,
                    int spin, double x, double v, DynamicsModel dynamics) {
    const double kinetic = 0.5 * mass * v * v;
    const double s_nv_sq = stage.spin == SpinState::SxPlusMinusOne ? 1.0 : 0.0;
    const double offsets = -c.chi_rho * mass / (2.0 * c.mu0) * stage.B0 * stage.B0 +
                           c.hbar * c.zero_field_D * s_nv_sq;
    if (stage.kind == StageKind::Harmonic) {
        const double w = omega_harmonic(c, stage.eta_linear);
        const bool force_on = stage.spin == SpinState::SxPlusMinusOne &&
                              !(dynamics == DynamicsModel::QuadraticIhp && stage.index == 3);
        double u = 0.5 * mass * w * w * x * x;
        if (force_on) u += spin * c.hbar * c.gamma_e * stage.eta_linear * x;
        return kinetic + u + offsets;
    }
    const double w = omega_inverted(c, stage.B0, stage.eta_nonlinear);
    double u = -0.5 * mass * w * w * x * x;
    if (dynamics == DynamicsModel::FullPotential) {
        u -= c.chi_rho * mass / (2.0 * c.mu0) * stage.eta_nonlinear * stage.eta_nonlinear *
             x * x * x * x;
    }
    return kinetic + u + offsets;
}

namespace {

struct Deriv {
    const PhysicalConstants& c;
    const StageSpec& stage;
    double mass;
    int spin;
    DynamicsModel dynamics;
    void operator()(double x, double v, double& dx, double& dv) const {
        dx = v;
        dv = accel_exact(c, stage, mass, spin, x, dynamics);
    }
};

void rk4_step(const Deriv& f, double& x, double& v, double h) {
    double k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
    f(x, v, k1x, k1v);
    f(x + 0.5 * h * k1x, v + 0.5 * h * k1v, k2x, k2v);
    f(x + 0.5 * h * k2x, v + 0.5 * h * k2v, k3x, k3v);
    f(x + h * k3x, v + h * k3v, k4x, k4v);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
}

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                 A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
constexpr double E1 = 35.0 / 384.0 - 5179.0 / 57600.0, E3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                 E4 = 125.0 / 192.0 - 393.0 / 640.0, E5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
                 E6 = 11.0 / 84.0 - 187.0 / 2100.0, E7 = -1.0 / 40.0;

struct DopriResult {
    double x, v, err;
};

DopriResult dopri_step(const Deriv& f, double x, double v, double h) {
    double k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v, k5x, k5v, k6x, k6v, k7x, k7v;
    f(x, v, k1x, k1v);
    f(x + h * A21 * k1x, v + h * A21 * k1v, k2x, k2v);
    f(x + h * (A31 * k1x + A32 * k2x), v + h * (A31 * k1v + A32 * k2v), k3x, k3v);
    f(x + h * (A41 * k1x + A42 * k2x + A43 * k3x),
      v + h * (A41 * k1v + A42 * k2v + A43 * k3v), k4x, k4v);
    f(x + h * (A51 * k1x + A52 * k2x + A53 * k3x + A54 * k4x),
      v + h * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v), k5x, k5v);
    f(x + h * (A61 * k1x + A62 * k2x + A63 * k3x + A64 * k4x + A65 * k5x),
      v + h * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v), k6x, k6v);
    const double x5 = x + h * (B1 * k1x + B3 * k3x + B4 * k4x + B5 * k5x + B6 * k6x);
    const double v5 = v + h * (B1 * k1v + B3 * k3v + B4 * k4v + B5 * k5v + B6 * k6v);
    f(x5, v5, k7x, k7v);
    const double ex = h * (E1 * k1x + E3 * k3x + E4 * k4x + E5 * k5x + E6 * k6x + E7 * k7x);
    const double ev = h * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v + E7 * k7v);
    return {x5, v5, std::hypot(ex, ev)};
}

}  // namespace

NumericTrace integrate_stage(const PhysicalConstants& c, const StageSpec& stage,
                             double mass, int spin, ClassicalState incoming,
                             const IntegratorSettings& settings) {
    NumericTrace trace;
    trace.stage_index = stage.index;
    const Deriv f{c, stage, mass, spin, settings.dynamics};
    const double T = stage.duration;

    double x = incoming.x, v = incoming.v, t = 0.0;
    const double e0 = stage_energy(c, stage, mass, spin, x, v, settings.dynamics);
    const double e_scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
    trace.samples.push_back({0.0, x, v});

    auto note_energy = [&] {
        const double e = stage_energy(c, stage, mass, spin, x, v, settings.dynamics);
        trace.energy_drift = std::max(trace.energy_drift, std::abs(e - e0) / e_scale);
    };

    long steps = 0;
    if (settings.method == Method::RK4Fixed) {
        const long n = std::max(1L, std::lround(std::ceil(T / settings.step)));
        const double h = T / static_cast<double>(n);
        for (long i = 0; i < n; ++i) {
            rk4_step(f, x, v, h);
            t = (i + 1) * h;
            trace.samples.push_back({t, x, v});
            if (++steps % settings.energy_check_interval == 0) note_energy();
        }
    } else {
        // velocity and position live on very different scales; normalize the
        // error against a running per-component magnitude
        double h = T / 64.0;
        const double hmin = T * 1e-14;
        while (t < T) {
            if (t + h > T) h = T - t;
            const DopriResult r = dopri_step(f, x, v, h);
            const double scale =
                std::max({std::abs(x), std::abs(r.x), 1e-18}) +
                std::max({std::abs(v), std::abs(r.v), 1e-18});
            const double err = r.err / scale;
            if (err <= settings.tolerance) {
                t += h;
                x = r.x;
                v = r.v;
                trace.samples.push_back({t, x, v});
                if (++steps % settings.energy_check_interval == 0) note_energy();
                const double grow =
                    0.9 * std::pow(settings.tolerance / std::max(err, 1e-300), 0.2);
                h *= std::clamp(grow, 0.2, 5.0);
            } else {
                h *= std::max(0.2, 0.9 * std::pow(settings.tolerance / err, 0.25));
                if (h < hmin)
                    throw IntegrationError("adaptive step collapsed in stage " +
                                           std::to_string(stage.index));
            }
            if (steps > settings.max_steps)
                throw IntegrationError("step budget exceeded in stage " +
                                       std::to_string(stage.index));
        }
    }
    note_energy();
    trace.final_state = {x, v, incoming.t + T};
    return trace;
}

namespace {

/// Bisects v(t) = 0 between two trace samples by re-integrating from the
/// bracket start with the same dynamics.
double refine_velocity_zero(const PhysicalConstants& c, const StageSpec& stage, double mass,
                            int spin, const IntegratorSettings& settings,
                            std::array<double, 3> lo, std::array<double, 3> hi,
                            double& x_at_zero) {
    const Deriv f{c, stage, mass, spin, settings.dynamics};
    auto eval = [&](double t) {
        // short fixed-step RK4 hop from the bracket start
        double x = lo[1], v = lo[2];
        const double span = t - lo[0];
        const int n = 64;
        const double h = span / n;
        for (int i = 0; i < n; ++i) rk4_step(f, x, v, h);
        x_at_zero = x;
        return v;
    };
    double a = lo[0], b = hi[0];
    double fa = lo[2];
    for (int it = 0; it < 200 && (b - a) > 1e-16 * std::max(1.0, std::abs(b)); ++it) {
        const double m = 0.5 * (a + b);
        const double fm = eval(m);
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    eval(0.5 * (a + b));
    return 0.5 * (a + b);
}

}  // namespace

ProtocolTrace integrate_protocol(const ExperimentConfig& cfg, int spin,
                                 const IntegratorSettings& settings) {
    ProtocolTrace out;
    ClassicalState state{0.0, 0.0, 0.0};
    double t0 = 0.0;
    for (const auto& stage : cfg.stages) {
        NumericTrace tr = integrate_stage(cfg.constants, stage, cfg.particle.mass, spin,
                                          state, settings);
        out.max_energy_drift = std::max(out.max_energy_drift, tr.energy_drift);

        // arm separation peaks where the velocity crosses zero away from the
        // origin; scan this stage's samples for the bracket
        for (std::size_t i = 1; i < tr.samples.size(); ++i) {
            const auto& s0 = tr.samples[i - 1];
            const auto& s1 = tr.samples[i];
            if (s0[2] == 0.0 && i == 1) continue;  // initial rest
            if ((s0[2] < 0.0) != (s1[2] < 0.0)) {
                double x_at = 0.0;
                const double tz = refine_velocity_zero(cfg.constants, stage,
                                                       cfg.particle.mass, spin, settings,
                                                       s0, s1, x_at);
                const double sep = 2.0 * std::abs(x_at);
                if (sep > out.peak_separation) {
                    out.peak_separation = sep;
                    out.peak_time = t0 + tz;
                }
            }
        }
        state = tr.final_state;
        t0 += stage.duration;
        out.stages.push_back(std::move(tr));
    }
    out.final_state = state;
    return out;
}

ComparisonReport compare_analytic_numeric(const ExperimentConfig& cfg,
                                          const IntegratorSettings& settings) {
    ComparisonReport r;
    const ProtocolResult analytic = run_protocol(cfg);
    const ProtocolTrace numeric = integrate_protocol(cfg, +1, settings);

    r.analytic_peak = analytic.peak.separation;
    r.numeric_peak = numeric.peak_separation;
    r.peak_rel_error = std::abs(r.numeric_peak - r.analytic_peak) /
                       std::max(r.analytic_peak, std::numeric_limits<double>::min());
    r.analytic_peak_time = analytic.peak.t_global;
    r.numeric_peak_time = numeric.peak_time;
    r.peak_time_error = std::abs(r.numeric_peak_time - r.analytic_peak_time);
    r.analytic_final_x = analytic.final_state.x;
    r.analytic_final_v = analytic.final_state.v;
    r.numeric_final_x = numeric.final_state.x;
    r.numeric_final_v = numeric.final_state.v;
    r.max_energy_drift = numeric.max_energy_drift;
    return r;
}

std::vector<MassScalingPoint> mass_scaling_sweep(const ExperimentConfig& cfg,
                                                 const std::vector<double>& masses,
                                                 IntegratorSettings settings) {
    // only stages 1..3 matter for the peak; drop the rest so the sweep does
    // not depend on deceleration-stage tuning
    ExperimentConfig base = cfg;
    base.mode = ProtocolMode::Custom;
    base.stages.clear();
    for (const auto& s : cfg.stages)
        if (s.index <= 3) base.stages.push_back(s);

    std::vector<MassScalingPoint> out;
    out.reserve(masses.size());
    for (double m : masses) {
        ExperimentConfig c = base;
        c.particle.mass = m;
        const ProtocolTrace tr = integrate_protocol(c, +1, settings);
        out.push_back({m, tr.peak_separation});
    }
    return out;
}

double log_log_slope(const std::vector<MassScalingPoint>& points) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(points.size());
    for (const auto& p : points) {
        const double lx = std::log10(p.mass);
        const double ly = std::log10(p.peak_separation);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sgsim
