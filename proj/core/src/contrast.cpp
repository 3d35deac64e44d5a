#include "sgsim/contrast.hpp"

#include <cmath>
#include <stdexcept>

#include "sgsim/wavepacket.hpp"

namespace sgsim {

double contrast_from_deviations(const Deviations& d, double sigma_x) {
    if (!(sigma_x > 0.0)) throw std::domain_error("contrast: sigma_x must be > 0");
    const double s2 = sigma_x * sigma_x;
    return std::exp(-d.delta_x * d.delta_x / (8.0 * s2) - s2 * d.delta_b * d.delta_b / 2.0);
}

double contrast_two_widths(double delta_x, double delta_b, double sigma_l, double sigma_r) {
    // |integral psi_L^* psi_R| for shared a, widths sigma_l, sigma_r
    const double sl2 = sigma_l * sigma_l, sr2 = sigma_r * sigma_r;
    const double ssum = sl2 + sr2;
    const double amp = std::sqrt(2.0 * sigma_l * sigma_r / ssum);
    const double ex = -delta_x * delta_x / (4.0 * ssum) -
                      sl2 * sr2 * delta_b * delta_b / ssum;
    return amp * std::exp(ex);
}

namespace {

struct ArmEnd {
    double x = 0.0;
    double v = 0.0;
};

/// Replays the right arm (spin -1, positive side) through the per-stage
/// closed-form anchors: the separation and recombination stages run half
/// their own period, the deceleration stage ends at its stall. Gradient
/// offsets are absolute shifts applied to every stage of the matching field
/// type.
ArmEnd replay_right_arm(const ExperimentConfig& cfg, double dx0, double d_eta_l,
                        double d_eta_n) {
    const auto& c = cfg.constants;
    const double m = cfg.particle.mass;
    const int spin = -1;

    double x = dx0, v = 0.0;
    for (const auto& st : cfg.stages) {
        if (st.kind == StageKind::Harmonic) {
            const double eta = st.eta_linear + d_eta_l;
            if (!(eta > 0.0)) throw std::domain_error("perturbed eta_linear must stay > 0");
            const double w = omega_harmonic(c, eta);
            const bool forced = st.spin == SpinState::SxPlusMinusOne &&
                                !(cfg.mode == ProtocolMode::FiveStage && st.index == 3);
            const double xeq = forced ? harmonic_equilibrium(c, m, eta, spin) : 0.0;
            const bool half_period_anchor =
                cfg.mode == ProtocolMode::FiveStage && (st.index == 1 || st.index == 5);
            if (half_period_anchor) {
                x = 2.0 * xeq - x;
                v = -v;  // half a period mirrors the state about the equilibrium
                continue;
            }
            const double co = std::cos(w * st.duration), sn = std::sin(w * st.duration);
            const double x0 = x - xeq;
            x = xeq + x0 * co + v / w * sn;
            v = -x0 * w * sn + v * co;
        } else {
            const double eta = st.eta_nonlinear + d_eta_n;
            if (!(eta > 0.0)) throw std::domain_error("perturbed eta_nonlinear must stay > 0");
            const double w = omega_inverted(c, st.B0, eta);
            if (cfg.mode == ProtocolMode::FiveStage && st.index == 4) {
                // deceleration anchor: end at the stall, v = 0
                const double arg = x * x * w * w - v * v;
                const double num = x * w - v, den = x * w + v;
                if (arg <= 0.0 || num * den <= 0.0 ||
                    0.5 / w * std::log(num / den) <= 0.0)
                    throw NoStallError("perturbation removes the stage-4 stall");
                x = (x >= 0.0 ? 1.0 : -1.0) * std::sqrt(arg) / w;
                v = 0.0;
            } else {
                const double ch = std::cosh(w * st.duration), sh = std::sinh(w * st.duration);
                const double x0 = x;
                x = x0 * ch + v / w * sh;
                v = x0 * w * sh + v * ch;
            }
        }
    }
    return {x, v};
}

double max_gradient(const ExperimentConfig& cfg, StageKind kind) {
    double g = 0.0;
    for (const auto& s : cfg.stages)
        if (s.kind == kind)
            g = std::max(g, kind == StageKind::Harmonic ? s.eta_linear : s.eta_nonlinear);
    if (g <= 0.0) throw std::domain_error("config has no stage of the requested field type");
    return g;
}

}  // namespace

double admissible_sign(const ExperimentConfig& cfg, PerturbationAxis axis) {
    (void)cfg;
    if (axis == PerturbationAxis::InitialPosition) return +1.0;
    return axis == PerturbationAxis::LinearGradient ? -1.0 : +1.0;
}

Deviations perturbed_protocol_deviations(const ExperimentConfig& cfg, const Perturbation& p) {
    double dx0 = 0.0, dl = 0.0, dn = 0.0;
    switch (p.axis) {
        case PerturbationAxis::LinearGradient:
            dl = p.value * max_gradient(cfg, StageKind::Harmonic);
            break;
        case PerturbationAxis::NonlinearGradient:
            dn = p.value * max_gradient(cfg, StageKind::InvertedHarmonic);
            break;
        case PerturbationAxis::InitialPosition:
            dx0 = p.value;
            break;
    }
    const ArmEnd nominal = replay_right_arm(cfg, 0.0, 0.0, 0.0);
    const ArmEnd perturbed = replay_right_arm(cfg, dx0, dl, dn);
    Deviations d;
    d.delta_x = perturbed.x - nominal.x;
    d.delta_b = cfg.particle.mass * (perturbed.v - nominal.v) / cfg.constants.hbar;
    return d;
}

std::vector<ContrastResult> contrast_sweep(const ExperimentConfig& cfg,
                                           PerturbationAxis axis,
                                           const std::vector<double>& values) {
    const double sigma = chain_through_protocol(cfg).sigma_max;
    std::vector<ContrastResult> out;
    out.reserve(values.size());
    for (double v : values) {
        ContrastResult r;
        r.perturbation = {axis, v};
        r.sigma_x_final = sigma;
        try {
            r.deviations = perturbed_protocol_deviations(cfg, r.perturbation);
            r.contrast = contrast_from_deviations(r.deviations, sigma);
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

double hp_only_contrast(const ExperimentConfig& cfg, double delta_x0) {
    const double s0 = cfg.particle.sigma0;
    return std::exp(-delta_x0 * delta_x0 / (8.0 * s0 * s0));
}

double hp_only_contrast_generic(const ExperimentConfig& cfg, double delta_x0) {
    // one harmonic stage, full period, right arm displaced by delta_x0
    const StageSpec* st = nullptr;
    for (const auto& s : cfg.stages)
        if (s.kind == StageKind::Harmonic) {
            st = &s;
            break;
        }
    if (!st) throw std::domain_error("hp_only_contrast: no harmonic stage in config");
    const auto& c = cfg.constants;
    const double m = cfg.particle.mass;
    const double w = omega_harmonic(c, st->eta_linear);
    const double period = 2.0 * std::numbers::pi / w;

    auto arm = [&](double x0) {
        ClassicalState s = evolve_harmonic(c, m, st->eta_linear, -1, {x0, 0.0, 0.0}, period);
        return s;
    };
    const ClassicalState nominal = arm(0.0);
    const ClassicalState displaced = arm(delta_x0);
    Deviations d;
    d.delta_x = displaced.x - nominal.x;
    d.delta_b = m * (displaced.v - nominal.v) / c.hbar;

    // packet width after one full period equals the initial width
    PacketState pk = gaussian_initial(cfg.particle, c);
    pk = propagate_hp(pk, c, m, w, period);
    return contrast_from_deviations(d, pk.sigma_x);
}

double contrast_threshold(const ExperimentConfig& cfg, PerturbationAxis axis,
                          double c_target, double lo, double hi) {
    const double sigma = chain_through_protocol(cfg).sigma_max;
    const double sign = admissible_sign(cfg, axis);
    auto eval = [&](double mag) {
        const Deviations d =
            perturbed_protocol_deviations(cfg, {axis, sign * mag});
        return contrast_from_deviations(d, sigma);
    };
    double flo = eval(lo), fhi;
    try {
        fhi = eval(hi);
    } catch (const NoStallError&) {
        // shrink until the stall survives
        while (hi / lo > 4.0) {
            hi = std::sqrt(lo * hi);
            try {
                fhi = eval(hi);
                break;
            } catch (const NoStallError&) {
            }
        }
        fhi = eval(hi);
    }
    if ((flo < c_target) == (fhi < c_target))
        throw std::runtime_error("contrast_threshold: target not bracketed");
    for (int i = 0; i < 200 && hi / lo > 1.0 + 1e-12; ++i) {
        const double mid = std::sqrt(lo * hi);
        if (eval(mid) >= c_target)
            lo = mid;
        else
            hi = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace sgsim
