#pragma once

// Numerical integration of the stage dynamics without the quadratic IHP
// truncation. Harmonic stages keep the spin force; inverted stages carry the
// full diamagnetic potential including the quartic term. A quadratic-model
// variant integrates exactly the dynamics the closed forms solve, so the two
// routes can be compared at machine-level tolerances.

#include <array>
#include <stdexcept>
#include <vector>

#include "sgsim/model.hpp"
#include "sgsim/trajectory.hpp"

namespace sgsim {

enum class Method { RK4Fixed, RK45Adaptive };

/// FullPotential: quartic IHP term included, spin force on every harmonic
/// stage. QuadraticIhp: the model dynamics behind the closed forms (quadratic
/// IHP, stage-3 spin force dropped when stage_index == 3).
enum class DynamicsModel { FullPotential, QuadraticIhp };

struct IntegratorSettings {
    Method method = Method::RK45Adaptive;
    double step = 1e-5;         // RK4Fixed
    double tolerance = 1e-12;   // RK45Adaptive, relative
    int energy_check_interval = 16;
    DynamicsModel dynamics = DynamicsModel::FullPotential;
    long max_steps = 50'000'000;
};

class IntegrationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct NumericTrace {
    std::vector<std::array<double, 3>> samples;  // t, x, v (t local to the stage)
    double energy_drift = 0.0;                   // max |E - E0| / |E0|
    int stage_index = 0;
    ClassicalState final_state;                  // global clock
};

/// Acceleration at x for one stage. spin is the arm's quantum number; it only
/// acts on harmonic stages.
double accel_exact(const PhysicalConstants& c, const StageSpec& stage, double mass,
                   int spin, double x, DynamicsModel dynamics = DynamicsModel::FullPotential);

/// Energy per unit mass-independent bookkeeping: kinetic plus stage potential
/// including the constant offsets (bias-field energy, zero-field splitting).
double stage_energy(const PhysicalConstants& c, const StageSpec& stage, double mass,
                    int spin, double x, double v,
                    DynamicsModel dynamics = DynamicsModel::FullPotential);

NumericTrace integrate_stage(const PhysicalConstants& c, const StageSpec& stage,
                             double mass, int spin, ClassicalState incoming,
                             const IntegratorSettings& settings = {});

struct ProtocolTrace {
    std::vector<NumericTrace> stages;
    ClassicalState final_state;
    double peak_separation = 0.0;
    double peak_time = 0.0;
    double max_energy_drift = 0.0;
};

/// Integrates all stages of one arm in sequence and locates the separation
/// peak by bisecting the velocity zero inside the stage that contains it.
ProtocolTrace integrate_protocol(const ExperimentConfig& cfg, int spin,
                                 const IntegratorSettings& settings = {});

struct ComparisonReport {
    double analytic_peak = 0.0;
    double numeric_peak = 0.0;
    double peak_rel_error = 0.0;
    double analytic_peak_time = 0.0;
    double numeric_peak_time = 0.0;
    double peak_time_error = 0.0;
    double analytic_final_x = 0.0;
    double numeric_final_x = 0.0;
    double analytic_final_v = 0.0;
    double numeric_final_v = 0.0;
    double max_energy_drift = 0.0;
};

ComparisonReport compare_analytic_numeric(const ExperimentConfig& cfg,
                                          const IntegratorSettings& settings = {});

struct MassScalingPoint {
    double mass = 0.0;
    double peak_separation = 0.0;
};

/// Peak separation against mass with the stage parameters held fixed. Runs
/// the quadratic model by default; with fixed fields the light masses push
/// the excursion outside the IHP validity bound and the full potential bends
/// the scaling away from 1/m.
std::vector<MassScalingPoint> mass_scaling_sweep(
    const ExperimentConfig& cfg, const std::vector<double>& masses,
    IntegratorSettings settings = {.method = Method::RK45Adaptive,
                                   .step = 1e-5,
                                   .tolerance = 1e-12,
                                   .energy_check_interval = 16,
                                   .dynamics = DynamicsModel::QuadraticIhp,
                                   .max_steps = 50'000'000});

/// Least-squares slope of log10(peak) vs log10(mass).
double log_log_slope(const std::vector<MassScalingPoint>& points);

}  // namespace sgsim
