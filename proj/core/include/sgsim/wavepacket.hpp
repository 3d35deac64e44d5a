#pragma once

// Gaussian-shape wavepacket evolution under quadratic potentials.
//
//   psi(x) = N exp[ -(x - x_c)^2 / 4 sigma_x^2 + i (a x^2/4 + b x + c) ]
//
// Both propagators are the Mobius map on the complex parameter
// A = a + i/sigma^2,
//
//   A' = (A cs -/+ 2k sn) / (cs + A sn / 2k),   k = m omega / hbar,
//
// with (cs, sn) = (cos, sin) for the harmonic well (upper sign) and
// (cosh, sinh) for the inverted one (lower sign). The map is evaluated in
// component form, which is finite at all times; the textbook tan-based
// parametrization has removable singularities at odd multiples of
// omega t = pi/2 that never appear here.
//
// c tracks the quadratic-propagator phase with principal branches. Forced
// stages add the constant completing-the-square energy phase; spin-pulse
// relabelings leave every parameter unchanged.

#include <vector>

#include "sgsim/model.hpp"

namespace sgsim {

struct PacketState {
    double sigma_x = 0.0;  // m
    double x_c = 0.0;      // m
    double a = 0.0;        // m^-2
    double b = 0.0;        // m^-1
    double c = 0.0;        // dimensionless phase
    double t = 0.0;        // s
    // |integral |psi|^2 - 1| implied by the last propagation step
    double norm_error = 0.0;
};

/// Modulus of the normalization factor, (2 pi sigma^2)^(-1/4).
double norm_factor(const PacketState& s);

/// sigma_p = (hbar/2) sqrt(1/sigma^2 + a^2 sigma^2); the uncertainty product
/// is (hbar/2) sqrt(1 + a^2 sigma^4) >= hbar/2.
double sigma_p(const PacketState& s, const PhysicalConstants& c);

/// Gaussian initial state: a0 = 0, b0 = p0/hbar, c0 = -p0 x0 / hbar.
PacketState gaussian_initial(const ParticleSpec& p, const PhysicalConstants& c);

PacketState propagate_hp(const PacketState& in, const PhysicalConstants& c, double mass,
                         double omega, double t);

/// Throws std::range_error when omega * t would overflow cosh.
PacketState propagate_ihp(const PacketState& in, const PhysicalConstants& c, double mass,
                          double omega, double t);

/// Harmonic stage with the spin force on: exact evolution via the
/// equilibrium-shifted frame.
PacketState propagate_harmonic_forced(const PacketState& in, const PhysicalConstants& c,
                                      double mass, double eta_l, int spin, double t);

/// omega -> 0 limit; requires a = 0 (free spreading anchor for both maps).
PacketState free_limit(const PacketState& in, const PhysicalConstants& c, double mass,
                       double t);

struct PacketSample {
    double t = 0.0;
    double sigma_x = 0.0;
    double x_c = 0.0;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct ChainResult {
    std::vector<PacketState> boundaries;  // state after each stage
    std::vector<PacketSample> series;
    double sigma_final = 0.0;  // width at the end of the last stage
    double sigma_max = 0.0;    // maximum width over the sampled protocol
};

/// Feeds each stage's output packet into the next stage. The x_c/b track the
/// spin +1 arm. sigma_max is what the contrast analysis consumes; the packet
/// refocuses through the deceleration stage, so sigma_final is close to the
/// initial width again.
ChainResult chain_through_protocol(const ExperimentConfig& cfg, int samples_per_stage = 256);

}  // namespace sgsim
