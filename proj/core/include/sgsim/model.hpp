#pragma once

// Experiment description: particle, stage list, derived trap frequencies and
// input validation. All types are immutable value types once constructed;
// validation reports violations as data instead of throwing.

#include <string>
#include <vector>

#include "sgsim/constants.hpp"

namespace sgsim {

enum class StageKind { Harmonic, InvertedHarmonic };
enum class SpinState { SxPlusMinusOne, SxZero };
enum class ProtocolMode { FiveStage, Custom };

/// Initial wavepacket and mass of the levitated particle.
struct ParticleSpec {
    double mass = 1e-15;    // kg
    double sigma0 = 2e-11;  // m
    double x0 = 0.0;        // m
    double p0 = 0.0;        // kg m / s
};

/// One protocol stage. Harmonic stages carry eta_linear only,
/// inverted-harmonic stages carry eta_nonlinear only; the unused gradient
/// stays zero. A negative duration marks a field left open for the solver.
struct StageSpec {
    int index = 0;
    StageKind kind = StageKind::Harmonic;
    double B0 = 0.0;             // T
    double eta_linear = 0.0;     // T/m
    double eta_nonlinear = 0.0;  // T/m^2
    double duration = 0.0;       // s
    SpinState spin = SpinState::SxPlusMinusOne;
};

struct ExperimentConfig {
    PhysicalConstants constants;
    ParticleSpec particle;
    std::vector<StageSpec> stages;
    ProtocolMode mode = ProtocolMode::FiveStage;
};

struct ValidationIssue {
    std::string where;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

/// omega_h = sqrt(-chi_rho/mu0) * eta_l. Throws std::domain_error for
/// eta_l <= 0.
double omega_harmonic(const PhysicalConstants& c, double eta_l);

/// omega_r = sqrt(-2 chi_rho B0 eta_n / mu0). Throws std::domain_error for
/// non-positive B0 or eta_n.
double omega_inverted(const PhysicalConstants& c, double B0, double eta_n);

/// Frequency of a stage's quadratic potential, dispatching on kind.
double stage_omega(const PhysicalConstants& c, const StageSpec& s);

/// Position scale sqrt(2 B0 / eta_n) below which the inverted quadratic
/// approximation holds. Callers compare |<x>| against a fraction of it.
double ihp_validity_bound(double B0, double eta_n);

/// Default fraction of the validity bound that triggers excursion warnings.
inline constexpr double kIhpExcursionWarnFraction = 0.1;

ValidationReport validate_config(const ExperimentConfig& cfg);

}  // namespace sgsim
