#pragma once

#include <numbers>

namespace sgsim {

/// Fundamental constants in SI units. chi_rho is negative (diamagnet);
/// gamma_e follows the NV-center convention 2*pi * 28 GHz/T.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;                                 // J s
    double mu0 = 1.25663706212e-6;                                 // T m / A
    double gamma_e = 2.0 * std::numbers::pi * 28.0e9;              // rad s^-1 T^-1
    double chi_rho = -6.2e-9;                                      // m^3 / kg
    double zero_field_D = 2.0 * std::numbers::pi * 2.8e9;          // rad / s, inert offset
};

/// Electron charge for eV reporting in the field-check tool.
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C

}  // namespace sgsim
