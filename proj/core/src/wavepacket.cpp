#include "sgsim/wavepacket.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sgsim/trajectory.hpp"

namespace sgsim {

namespace {

constexpr double kPi = std::numbers::pi;

PacketState apply_map(const PacketState& in, double k, double t, double cs, double sn,
                      double sn_2k, double kap) {
    const double s2 = in.sigma_x * in.sigma_x;

    const double dr = cs + in.a * sn_2k;
    const double di = sn_2k / s2;
    const double d2 = dr * dr + di * di;

    PacketState out;
    out.sigma_x = in.sigma_x * std::sqrt(d2);

    // Re(num conj(D)) / |D|^2 with num = A cs + kappa 2k sn
    const double kap4k2 = kap * 4.0 * k * k;
    out.a = (in.a * (cs * cs + kap * sn * sn) +
             (cs * sn_2k) * (in.a * in.a + kap4k2 + 1.0 / (s2 * s2))) /
            d2;

    out.x_c = in.x_c * dr + 2.0 * in.b * sn_2k;  // = x_c dr + hbar b sn / (m omega)
    out.b = (in.b * dr - in.x_c * sn_2k / (2.0 * s2 * s2)) / d2;

    // phase and norm bookkeeping
    const double re_b2 = in.x_c * in.x_c / (4.0 * s2 * s2) - in.b * in.b;
    const double im_b2 = in.x_c * in.b / s2;
    const double re_b2_over_d = (re_b2 * dr + im_b2 * di) / d2;
    const double im_b2_over_d = (im_b2 * dr - re_b2 * di) / d2;
    out.c = in.c + sn_2k * re_b2_over_d - 0.5 * std::atan2(di, dr);

    const double s2_out = out.sigma_x * out.sigma_x;
    const double delta = out.x_c * out.x_c / (2.0 * s2_out) -
                         in.x_c * in.x_c / (2.0 * s2) - 2.0 * sn_2k * im_b2_over_d;
    out.norm_error = std::abs(std::expm1(delta));

    out.t = in.t + t;
    return out;
}

void check_inputs(const PacketState& in, double mass, double omega) {
    if (!(in.sigma_x > 0.0)) throw std::domain_error("packet width must be > 0");
    if (!(mass > 0.0)) throw std::domain_error("mass must be > 0");
    if (!(omega > 0.0)) throw std::domain_error("omega must be > 0");
}

}  // namespace

double norm_factor(const PacketState& s) {
    return std::pow(2.0 * kPi * s.sigma_x * s.sigma_x, -0.25);
}

double sigma_p(const PacketState& s, const PhysicalConstants& c) {
    const double s2 = s.sigma_x * s.sigma_x;
    return 0.5 * c.hbar * std::sqrt(1.0 / s2 + s.a * s.a * s2);
}

PacketState gaussian_initial(const ParticleSpec& p, const PhysicalConstants& c) {
    PacketState s;
    s.sigma_x = p.sigma0;
    s.x_c = p.x0;
    s.a = 0.0;
    s.b = p.p0 / c.hbar;
    s.c = -p.p0 * p.x0 / c.hbar;
    s.t = 0.0;
    return s;
}

PacketState propagate_hp(const PacketState& in, const PhysicalConstants& c, double mass,
                         double omega, double t) {
    check_inputs(in, mass, omega);
    const double k = mass * omega / c.hbar;
    const double cs = std::cos(omega * t);
    const double sn = std::sin(omega * t);
    return apply_map(in, k, t, cs, sn, sn / (2.0 * k), -1.0);
}

PacketState propagate_ihp(const PacketState& in, const PhysicalConstants& c, double mass,
                          double omega, double t) {
    check_inputs(in, mass, omega);
    if (omega * t > 700.0)
        throw std::range_error("propagate_ihp: omega*t > 700 overflows cosh; max t = " +
                               std::to_string(700.0 / omega) + " s");
    const double k = mass * omega / c.hbar;
    const double cs = std::cosh(omega * t);
    const double sn = std::sinh(omega * t);
    return apply_map(in, k, t, cs, sn, sn / (2.0 * k), +1.0);
}

PacketState propagate_harmonic_forced(const PacketState& in, const PhysicalConstants& c,
                                      double mass, double eta_l, int spin, double t) {
    if (spin == 0) return propagate_hp(in, c, mass, omega_harmonic(c, eta_l), t);
    const double omega = omega_harmonic(c, eta_l);
    const double xeq = harmonic_equilibrium(c, mass, eta_l, spin);

    // shift to the equilibrium frame y = x - xeq, propagate, shift back
    PacketState y = in;
    y.x_c = in.x_c - xeq;
    y.b = in.b + in.a * xeq / 2.0;
    y.c = in.c + in.a * xeq * xeq / 4.0 + in.b * xeq;

    PacketState yo = propagate_hp(y, c, mass, omega, t);

    PacketState out = yo;
    out.x_c = yo.x_c + xeq;
    out.b = yo.b - yo.a * xeq / 2.0;
    out.c = yo.c - yo.a * xeq * xeq / 4.0 - out.b * xeq;
    // completing-the-square energy offset -1/2 m w^2 xeq^2 adds phase +E t/hbar
    out.c += 0.5 * mass * omega * omega * xeq * xeq * t / c.hbar;
    return out;
}

PacketState free_limit(const PacketState& in, const PhysicalConstants& c, double mass,
                       double t) {
    if (in.a != 0.0) throw std::domain_error("free_limit requires a = 0");
    if (!(in.sigma_x > 0.0) || !(mass > 0.0)) throw std::domain_error("bad packet inputs");
    // omega -> 0: cs -> 1, sn/(2k) -> hbar t / (2 m), kappa 4k^2 sn cs/(2k) -> 0
    return apply_map(in, 0.0, t, 1.0, 0.0, c.hbar * t / (2.0 * mass), -1.0);
}

ChainResult chain_through_protocol(const ExperimentConfig& cfg, int samples_per_stage) {
    ChainResult out;
    PacketState state = gaussian_initial(cfg.particle, cfg.constants);
    out.sigma_max = state.sigma_x;
    out.series.push_back({state.t, state.sigma_x, state.x_c, state.a, state.b, state.c});

    const int spin = +1;
    for (const auto& st : cfg.stages) {
        const bool forced =
            st.kind == StageKind::Harmonic && st.spin == SpinState::SxPlusMinusOne &&
            !(cfg.mode == ProtocolMode::FiveStage && st.index == 3);

        auto step = [&](const PacketState& from, double dt) {
            if (st.kind == StageKind::Harmonic) {
                if (forced)
                    return propagate_harmonic_forced(from, cfg.constants, cfg.particle.mass,
                                                     st.eta_linear, spin, dt);
                return propagate_hp(from, cfg.constants, cfg.particle.mass,
                                    omega_harmonic(cfg.constants, st.eta_linear), dt);
            }
            return propagate_ihp(from, cfg.constants, cfg.particle.mass,
                                 omega_inverted(cfg.constants, st.B0, st.eta_nonlinear), dt);
        };

        for (int i = 1; i <= samples_per_stage; ++i) {
            const double dt = st.duration * i / samples_per_stage;
            const PacketState s = step(state, dt);
            out.sigma_max = std::max(out.sigma_max, s.sigma_x);
            out.series.push_back({s.t, s.sigma_x, s.x_c, s.a, s.b, s.c});
        }
        state = step(state, st.duration);
        out.boundaries.push_back(state);
    }
    out.sigma_final = state.sigma_x;
    return out;
}

}  // namespace sgsim
