#pragma once

// Magnetic field models. The 1D kinds are the working fields of the stage
// Hamiltonians; the 2D kinds are their curl- and divergence-free completions
// used for force landscapes and consistency checks.
//
// Linear:    B = (B0 + eta x) e_x - eta y e_y
// Nonlinear: B = (B0 - eta (x^2 - y^2)) e_x + 2 eta x y e_y
//
// Both satisfy div B = 0 and curl B = 0 identically (they are the real and
// negated imaginary parts of the analytic functions B0 + eta z and
// B0 - eta z^2).

#include <array>
#include <string>
#include <vector>

#include "sgsim/constants.hpp"

namespace sgsim {

enum class FieldKind { Linear1D, Nonlinear1D, Linear2D, Nonlinear2D };

struct FieldModel {
    FieldKind kind = FieldKind::Linear1D;
    double B0 = 0.0;   // T
    double eta = 0.0;  // T/m for linear kinds, T/m^2 for nonlinear kinds
    // Multiplies the y-component. 1 is the physical field; other values break
    // the Maxwell identities on purpose so the residual check can be tested.
    double y_gradient_scale = 1.0;
};

struct FieldSample {
    double Bx = 0.0;
    double By = 0.0;
};

struct ForceSample {
    std::array<double, 2> position{};  // x, y
    std::array<double, 2> force{};     // Fx, Fy (N)
    std::array<std::string, 2> dominant_term{};
};

struct GridSpec {
    double half_extent = 25e-6;  // m, grid spans [-h, h] in x and y
    int points_per_axis = 101;
};

struct MaxwellResiduals {
    double max_abs_div = 0.0;
    double max_abs_curl = 0.0;
};

struct YConfinementReport {
    double omega_y = 0.0;    // rad/s
    double amplitude = 0.0;  // m, oscillation amplitude for a width-sized kick
    double ratio = 0.0;      // amplitude / superposition scale
};

FieldSample field_at(const FieldModel& f, double x, double y);

/// Analytic divergence and curl evaluated termwise on a grid. 2D kinds only;
/// 1D kinds raise std::invalid_argument.
MaxwellResiduals maxwell_residuals(const FieldModel& f, const GridSpec& grid = {});

/// Potential energy -(chi m / 2 mu0) B^2 + hbar gamma_e S_x B_x at a point.
/// The S_y coupling is Larmor-averaged to zero and excluded.
double potential_energy(const FieldModel& f, const PhysicalConstants& c, double mass,
                        int spin_x, double x, double y);

/// Force per component with the largest-magnitude contributing term named.
/// S_y terms are dropped unless include_sy_terms is set (diagnostic only).
ForceSample force_at(const FieldModel& f, const PhysicalConstants& c, double mass,
                     int spin_x, double x, double y, bool include_sy_terms = false,
                     double s_y = 0.0);

double larmor_frequency(const PhysicalConstants& c, double B0);

/// Frequency and excursion of the transverse oscillation implied by the
/// dominant y-term, for an initial displacement of one wavepacket width.
YConfinementReport y_confinement_report(const FieldModel& f, const PhysicalConstants& c,
                                        double mass, double sigma0,
                                        double superposition_scale = 50e-6);

}  // namespace sgsim
