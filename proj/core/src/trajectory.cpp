#include "sgsim/trajectory.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace sgsim {

namespace {

constexpr double kPi = std::numbers::pi;

const StageSpec& stage_at(const ExperimentConfig& cfg, int index) {
    for (const auto& s : cfg.stages)
        if (s.index == index) return s;
    throw std::invalid_argument("config has no stage " + std::to_string(index));
}

StageSolution make_harmonic_solution(int index, double omega, double duration, double x_eq,
                                     ClassicalState in) {
    StageSolution s;
    s.stage_index = index;
    s.kind = StageKind::Harmonic;
    s.omega = omega;
    s.duration = duration;
    s.x_eq = x_eq;
    s.c_cos = in.x - x_eq;
    s.c_sin = in.v / omega;
    s.incoming = in;
    return s;
}

StageSolution make_inverted_solution(int index, double omega, double duration,
                                     ClassicalState in) {
    StageSolution s;
    s.stage_index = index;
    s.kind = StageKind::InvertedHarmonic;
    s.omega = omega;
    s.duration = duration;
    s.c_cos = in.x;
    s.c_sin = in.v / omega;
    s.incoming = in;
    return s;
}

}  // namespace

double StageSolution::position(double t) const {
    if (kind == StageKind::Harmonic)
        return x_eq + c_cos * std::cos(omega * t) + c_sin * std::sin(omega * t);
    return c_cos * std::cosh(omega * t) + c_sin * std::sinh(omega * t);
}

double StageSolution::velocity(double t) const {
    if (kind == StageKind::Harmonic)
        return omega * (-c_cos * std::sin(omega * t) + c_sin * std::cos(omega * t));
    return omega * (c_cos * std::sinh(omega * t) + c_sin * std::cosh(omega * t));
}

ClassicalState StageSolution::end_state() const {
    return {position(duration), velocity(duration), incoming.t + duration};
}

double harmonic_equilibrium(const PhysicalConstants& c, double mass, double eta_l, int spin) {
    const double w = omega_harmonic(c, eta_l);
    return -spin * c.hbar * c.gamma_e * eta_l / (mass * w * w);
}

ClassicalState evolve_harmonic(const PhysicalConstants& c, double mass, double eta_l,
                               int spin, ClassicalState in, double dt) {
    const double w = omega_harmonic(c, eta_l);
    const double xeq = spin == 0 ? 0.0 : harmonic_equilibrium(c, mass, eta_l, spin);
    const double co = std::cos(w * dt), sn = std::sin(w * dt);
    ClassicalState out;
    out.x = xeq + (in.x - xeq) * co + in.v / w * sn;
    out.v = -(in.x - xeq) * w * sn + in.v * co;
    out.t = in.t + dt;
    return out;
}

ClassicalState evolve_inverted(const PhysicalConstants& c, double mass, double B0,
                               double eta_n, ClassicalState in, double dt) {
    (void)mass;
    const double w = omega_inverted(c, B0, eta_n);
    const double ch = std::cosh(w * dt), sh = std::sinh(w * dt);
    ClassicalState out;
    out.x = in.x * ch + in.v / w * sh;
    out.v = in.x * w * sh + in.v * ch;
    out.t = in.t + dt;
    return out;
}

StageSolution stage1_trajectory(const ExperimentConfig& cfg, int spin) {
    const StageSpec& st = stage_at(cfg, 1);
    const double w = omega_harmonic(cfg.constants, st.eta_linear);
    const double xeq =
        harmonic_equilibrium(cfg.constants, cfg.particle.mass, st.eta_linear, spin);
    return make_harmonic_solution(1, w, st.duration, xeq, {0.0, 0.0, 0.0});
}

StageSolution stage2_trajectory(const ExperimentConfig& cfg, ClassicalState incoming) {
    const StageSpec& st = stage_at(cfg, 2);
    const double w = omega_inverted(cfg.constants, st.B0, st.eta_nonlinear);
    StageSolution s = make_inverted_solution(2, w, st.duration, incoming);
    const double bound = ihp_validity_bound(st.B0, st.eta_nonlinear);
    if (std::abs(s.position(st.duration)) > kIhpExcursionWarnFraction * bound)
        s.warnings.push_back("stage-2 excursion exceeds " +
                             std::to_string(kIhpExcursionWarnFraction) +
                             " of the validity bound");
    return s;
}

StageSolution stage3_trajectory(const ExperimentConfig& cfg, ClassicalState incoming) {
    const StageSpec& st = stage_at(cfg, 3);
    const double w = omega_harmonic(cfg.constants, st.eta_linear);
    // spin force dropped here: pure rotation about the origin
    StageSolution s = make_harmonic_solution(3, w, st.duration, 0.0, incoming);
    s.amplitude = std::hypot(incoming.x, incoming.v / w);
    s.phase = std::atan2(incoming.x, incoming.v / w);
    return s;
}

StageSolution stage4_trajectory(const ExperimentConfig& cfg, ClassicalState incoming) {
    const StageSpec& st = stage_at(cfg, 4);
    const double w = omega_inverted(cfg.constants, st.B0, st.eta_nonlinear);
    StageSolution s = make_inverted_solution(4, w, st.duration, incoming);

    const double num = incoming.x * w - incoming.v;
    const double den = incoming.x * w + incoming.v;
    if (num * den <= 0.0) {
        throw NoStallError("stage 4: velocity never reaches zero (x w = " +
                           std::to_string(incoming.x * w) +
                           ", v = " + std::to_string(incoming.v) + ")");
    }
    const double t4 = 0.5 / w * std::log(num / den);
    if (t4 < 0.0)
        throw NoStallError("stage 4: stall lies in the past for this incoming state");
    s.t_stall = t4;
    s.x_stall = s.position(t4);
    return s;
}

StageSolution stage5_trajectory(const ExperimentConfig& cfg, ClassicalState incoming,
                                int spin) {
    const StageSpec& st = stage_at(cfg, 5);
    const double w = omega_harmonic(cfg.constants, st.eta_linear);
    const double xeq =
        harmonic_equilibrium(cfg.constants, cfg.particle.mass, st.eta_linear, spin);
    StageSolution s = make_harmonic_solution(5, w, st.duration, xeq, incoming);
    if (std::abs(incoming.v) > 1e-9)
        s.warnings.push_back("stage-5 incoming velocity above closure tolerance");
    return s;
}

namespace {

int arm_spin(const ExperimentConfig& cfg) {
    (void)cfg;
    return +1;
}

std::vector<StageSolution> chain_stages(const ExperimentConfig& cfg) {
    std::vector<StageSolution> out;
    const int spin = arm_spin(cfg);
    if (cfg.mode == ProtocolMode::FiveStage && cfg.stages.size() == 5) {
        out.push_back(stage1_trajectory(cfg, spin));
        out.push_back(stage2_trajectory(cfg, out.back().end_state()));
        out.push_back(stage3_trajectory(cfg, out.back().end_state()));
        out.push_back(stage4_trajectory(cfg, out.back().end_state()));
        out.push_back(stage5_trajectory(cfg, out.back().end_state(), spin));
        return out;
    }
    // generic chaining for custom stage lists
    ClassicalState state{0.0, 0.0, 0.0};
    for (const auto& st : cfg.stages) {
        StageSolution s;
        if (st.kind == StageKind::Harmonic) {
            const double w = omega_harmonic(cfg.constants, st.eta_linear);
            const int sp = st.spin == SpinState::SxPlusMinusOne ? spin : 0;
            const double xeq =
                sp == 0 ? 0.0
                        : harmonic_equilibrium(cfg.constants, cfg.particle.mass, st.eta_linear, sp);
            s = make_harmonic_solution(st.index, w, st.duration, xeq, state);
        } else {
            const double w = omega_inverted(cfg.constants, st.B0, st.eta_nonlinear);
            s = make_inverted_solution(st.index, w, st.duration, state);
        }
        state = s.end_state();
        out.push_back(std::move(s));
    }
    return out;
}

/// Golden-section maximum of |x| on the closed form of one stage.
double golden_peak(const StageSolution& s, double lo, double hi) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    while (b - a > 1e-15 + 1e-12 * (std::abs(a) + std::abs(b))) {
        if (std::abs(s.position(c)) > std::abs(s.position(d))) {
            b = d;
        } else {
            a = c;
        }
        c = b - gr * (b - a);
        d = a + gr * (b - a);
    }
    return 0.5 * (a + b);
}

}  // namespace

PeakInfo peak_separation_time(const ExperimentConfig& cfg) {
    const int spin = arm_spin(cfg);
    StageSolution s1 = stage1_trajectory(cfg, spin);
    StageSolution s2 = stage2_trajectory(cfg, s1.end_state());
    StageSolution s3 = stage3_trajectory(cfg, s2.end_state());
    // first zero of the velocity: cos(w t + phase) = 0
    const double w = s3.omega;
    double t_star = std::fmod(kPi / 2.0 - s3.phase, kPi) / w;
    if (t_star < 0.0) t_star += kPi / w;
    PeakInfo p;
    p.t_in_stage3 = t_star;
    p.t_global = s1.duration + s2.duration + t_star;
    p.separation = 2.0 * std::abs(s3.position(t_star));
    return p;
}

double enhancement_factor(const ExperimentConfig& cfg) {
    const StageSpec& st2 = stage_at(cfg, 2);
    const StageSpec& st3 = stage_at(cfg, 3);
    const double w2 = omega_inverted(cfg.constants, st2.B0, st2.eta_nonlinear);
    const double w3 = omega_harmonic(cfg.constants, st3.eta_linear);
    const double ch = std::cosh(w2 * st2.duration);
    const double sh = std::sinh(w2 * st2.duration);
    return std::sqrt(ch * ch + (w2 / w3) * (w2 / w3) * sh * sh);
}

double max_superposition_size(const ExperimentConfig& cfg) {
    const StageSpec& st1 = stage_at(cfg, 1);
    const auto& c = cfg.constants;
    return st1.duration / cfg.particle.mass * (4.0 * c.hbar * c.gamma_e / kPi) *
           std::sqrt(c.mu0 / -c.chi_rho) * enhancement_factor(cfg);
}

ProtocolResult run_protocol(const ExperimentConfig& cfg, double sample_dt) {
    ProtocolResult r;
    r.stages = chain_stages(cfg);

    double t0 = 0.0;
    bool first_stage = true;
    for (const auto& s : r.stages) {
        const long n = std::max(1L, std::lround(std::ceil(s.duration / sample_dt)));
        for (long i = first_stage ? 0 : 1; i <= n; ++i) {
            const double lt = std::min(s.duration, i * sample_dt);
            TrajectorySample ts;
            ts.t = t0 + lt;
            ts.x_plus = s.position(lt);
            ts.v_plus = s.velocity(lt);
            ts.x_minus = -ts.x_plus;  // mirror arm
            ts.v_minus = -ts.v_plus;
            ts.separation = ts.x_plus - ts.x_minus;
            ts.velocity_difference = ts.v_plus - ts.v_minus;
            r.series.push_back(ts);
        }
        first_stage = false;
        t0 += s.duration;
    }
    if (!r.stages.empty()) r.final_state = r.stages.back().end_state();

    if (cfg.mode == ProtocolMode::FiveStage && r.stages.size() == 5) {
        r.peak = peak_separation_time(cfg);
    } else if (!r.stages.empty()) {
        // generic refinement: best sampled stage, then golden section inside it
        double best = 0.0;
        std::size_t best_stage = 0;
        double tacc = 0.0;
        std::vector<double> starts;
        for (const auto& s : r.stages) {
            starts.push_back(tacc);
            const double cand =
                std::max(std::abs(s.position(0.0)),
                         std::abs(s.position(golden_peak(s, 0.0, s.duration))));
            if (cand > best) {
                best = cand;
                best_stage = starts.size() - 1;
            }
            tacc += s.duration;
        }
        const auto& s = r.stages[best_stage];
        const double tp = golden_peak(s, 0.0, s.duration);
        r.peak.t_in_stage3 = tp;
        r.peak.t_global = starts[best_stage] + tp;
        r.peak.separation = 2.0 * std::abs(s.position(tp));
    }
    return r;
}

}  // namespace sgsim
