#pragma once

// Interferometric contrast under deterministic imperfections.
//
//   C = exp( -Dx^2 / 8 sigma^2 - sigma^2 Db^2 / 2 )
//
// Dx and Db come from replaying the per-stage closed forms with a perturbed
// parameter on one arm and differencing against the nominal replay of the
// same arm. The replay anchors each stage to its protocol role (stage 4 ends
// at its stall, stage 5 runs its half period), which is how the tuned
// parameter set is defined in the first place; a perturbation large enough
// to destroy the stage-4 stall is reported as an error.
//
// The width entering C is the packet's maximum width over the protocol. The
// packet refocuses during deceleration, and the recombination overlap of the
// inflated arms is set by the delocalized width, not the refocused one.

#include <optional>
#include <string>
#include <vector>

#include "sgsim/model.hpp"
#include "sgsim/trajectory.hpp"

namespace sgsim {

struct Deviations {
    double delta_x = 0.0;  // m
    double delta_b = 0.0;  // m^-1
};

enum class PerturbationAxis { LinearGradient, NonlinearGradient, InitialPosition };

struct Perturbation {
    PerturbationAxis axis = PerturbationAxis::LinearGradient;
    // LinearGradient / NonlinearGradient: relative value, normalized by the
    // largest gradient of that type in the config. InitialPosition: meters.
    double value = 0.0;
};

struct ContrastResult {
    double contrast = 0.0;
    Deviations deviations;
    double sigma_x_final = 0.0;  // width used in the exponent (protocol maximum)
    Perturbation perturbation;
    std::optional<std::string> error;
};

/// Overlap modulus for equal-width arms.
double contrast_from_deviations(const Deviations& d, double sigma_x);

/// Exact two-width overlap modulus, for sensitivity studies where the arms'
/// widths differ.
double contrast_two_widths(double delta_x, double delta_b, double sigma_l, double sigma_r);

/// Final-state deviations of the perturbed right arm against its nominal
/// replay. Throws NoStallError when the perturbation removes the stage-4
/// stall.
Deviations perturbed_protocol_deviations(const ExperimentConfig& cfg, const Perturbation& p);

std::vector<ContrastResult> contrast_sweep(const ExperimentConfig& cfg,
                                           PerturbationAxis axis,
                                           const std::vector<double>& values);

/// Single harmonic stage, both arms recombining after one full period:
/// C = exp(-dx0^2 / 8 sigma0^2).
double hp_only_contrast(const ExperimentConfig& cfg, double delta_x0);

/// Same quantity through the generic deviation + overlap pipeline.
double hp_only_contrast_generic(const ExperimentConfig& cfg, double delta_x0);

/// Bisects |value| for C(value) = c_target on the given axis. Returns the
/// magnitude; sign conventions follow contrast_sweep.
double contrast_threshold(const ExperimentConfig& cfg, PerturbationAxis axis,
                          double c_target = 0.99, double lo = 1e-10, double hi = 1e-3);

/// Sign of the gradient fluctuation that keeps the stage-4 stall alive; the
/// tuned stage sits on a separatrix and only admits one-sided perturbations.
double admissible_sign(const ExperimentConfig& cfg, PerturbationAxis axis);

}  // namespace sgsim
