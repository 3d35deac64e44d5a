#pragma once

// Closed-form CoM trajectories for the five-stage protocol. One arm is
// computed (spin quantum number +1 moves to negative x); the partner arm is
// its mirror image. Stage solutions store the closed-form coefficients so
// positions and velocities can be evaluated at any time without resampling.
//
// Stage structure:
//   1  harmonic, spin force on, starts from rest, runs half a period
//   2  inverted harmonic, spin off, exponential growth
//   3  harmonic, spin force dropped from the model, rotation back
//   4  inverted harmonic, deceleration toward a stall
//   5  harmonic, spin force on, half period back to the origin

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgsim/model.hpp"

namespace sgsim {

struct ClassicalState {
    double x = 0.0;  // m
    double v = 0.0;  // m/s
    double t = 0.0;  // s, global clock
};

/// x(t) = x_eq + c_cos cos(w t) + c_sin sin(w t)        (Harmonic)
/// x(t) = c_cos cosh(w t) + c_sin sinh(w t)             (InvertedHarmonic)
struct StageSolution {
    int stage_index = 0;
    StageKind kind = StageKind::Harmonic;
    double omega = 0.0;
    double duration = 0.0;
    double x_eq = 0.0;
    double c_cos = 0.0;
    double c_sin = 0.0;
    ClassicalState incoming;

    // stage-3 sinusoid decomposition x = amplitude * sin(w t + phase)
    double amplitude = 0.0;
    double phase = 0.0;
    // stage-4 stall, when it exists
    std::optional<double> t_stall;
    std::optional<double> x_stall;

    std::vector<std::string> warnings;

    double position(double local_t) const;
    double velocity(double local_t) const;
    ClassicalState end_state() const;
};

/// General forced-harmonic step: x'' = -w^2 x - spin hbar gamma_e eta_l / m.
ClassicalState evolve_harmonic(const PhysicalConstants& c, double mass, double eta_l,
                               int spin, ClassicalState in, double dt);

/// General inverted step: x'' = +w^2 x with w from (B0, eta_n).
ClassicalState evolve_inverted(const PhysicalConstants& c, double mass, double B0,
                               double eta_n, ClassicalState in, double dt);

/// Equilibrium displacement -spin hbar gamma_e eta_l / (m w^2) of the forced
/// harmonic stage.
double harmonic_equilibrium(const PhysicalConstants& c, double mass, double eta_l, int spin);

StageSolution stage1_trajectory(const ExperimentConfig& cfg, int spin);
StageSolution stage2_trajectory(const ExperimentConfig& cfg, ClassicalState incoming);
StageSolution stage3_trajectory(const ExperimentConfig& cfg, ClassicalState incoming);
StageSolution stage4_trajectory(const ExperimentConfig& cfg, ClassicalState incoming);
StageSolution stage5_trajectory(const ExperimentConfig& cfg, ClassicalState incoming, int spin);

/// Raised when the stage-4 stall time does not exist (velocity never reaches
/// zero for the given frequency and incoming state).
class NoStallError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct PeakInfo {
    double t_global = 0.0;    // s, measured from protocol start
    double t_in_stage3 = 0.0; // s, measured from stage-3 start
    double separation = 0.0;  // m, |x_plus - x_minus| at the peak
};

/// Time of maximum separation from the stage-3 closed form.
PeakInfo peak_separation_time(const ExperimentConfig& cfg);

/// Closed-form maximum size (T1/m)(4 hbar gamma_e / pi) sqrt(mu0/-chi) * zeta.
double max_superposition_size(const ExperimentConfig& cfg);
double enhancement_factor(const ExperimentConfig& cfg);  // zeta

struct TrajectorySample {
    double t = 0.0;
    double x_plus = 0.0;   // spin +1 arm
    double x_minus = 0.0;  // spin -1 arm
    double v_plus = 0.0;
    double v_minus = 0.0;
    double separation = 0.0;           // x_plus - x_minus
    double velocity_difference = 0.0;  // v_plus - v_minus
};

struct ProtocolResult {
    std::vector<StageSolution> stages;  // spin +1 arm
    std::vector<TrajectorySample> series;
    ClassicalState final_state;  // spin +1 arm
    PeakInfo peak;
};

/// Chains the five stages with (x, v) continuity and samples the arm pair.
/// Custom-mode configs are chained with the general closed forms.
ProtocolResult run_protocol(const ExperimentConfig& cfg, double sample_dt = 1e-5);

}  // namespace sgsim
