#pragma once

// Root-finding layer that completes a partially specified protocol: the
// return-stage duration from the peak timing, the deceleration gradient from
// the stall condition, and the recombination stage from the stall position.
//
// The deceleration stage is tuned so the arm velocity reaches zero exactly at
// the end of the stage; the stall separation then lands near the requested
// target by the near-symmetry with the enhancement stage and is reported as
// a residual rather than solved for.

#include <functional>
#include <optional>
#include <string>

#include "sgsim/config_io.hpp"
#include "sgsim/model.hpp"

namespace sgsim {

class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Brent-style bracketing root finder. f(lo) and f(hi) must differ in sign.
double find_root_brent(const std::function<double(double)>& f, double lo, double hi,
                       double xtol = 0.0, double rtol = 4.0 * 1e-16, int max_iter = 200);

struct ClosureProblem {
    ConfigDocument input;                 // stages 1-2 complete, later fields optional
    double stall_separation_target = 6e-9;  // m, checked against, not solved for
    double t3_quantum = 1e-5;             // s; T3 = 2T* floored to this grid (0 = exact)
    double eta4_bracket_lo = 0.5;         // fraction of the stage-2 gradient
    double eta4_bracket_hi = 1.5;
    double position_tolerance = 1e-12;    // m, closure
    double velocity_tolerance = 1e-9;     // m/s, closure
};

/// T3 = 2 T* in closed form (no quantization applied here).
double solve_T3(const ExperimentConfig& cfg);

/// Gradient of the deceleration stage such that the stall time equals T4.
/// The bracket is [lo, hi] x (stage-2 gradient); throws SolverError when the
/// stall-time residual does not change sign inside it.
double solve_stage4_eta(const ExperimentConfig& cfg, double stall_separation_target,
                        double T4);

struct Stage5Solution {
    double eta_l = 0.0;
    double T5 = 0.0;
};

/// Closed form from half-period closure with the equilibrium at X4/2.
/// X4 = 0 is reported as a degenerate problem (no recombination stage needed).
Stage5Solution solve_stage5(const ExperimentConfig& cfg, double X4);

struct ClosureReport {
    ExperimentConfig solved;
    double T1 = 0.0;        // half period of stage 1 when not supplied
    double T3 = 0.0;
    double T3_exact = 0.0;  // before quantization
    double eta4 = 0.0;
    double X4 = 0.0;        // signed stall position, spin +1 arm
    double stall_separation = 0.0;
    double stall_separation_target = 0.0;
    double eta5 = 0.0;
    double T5 = 0.0;
    double final_x = 0.0;
    double final_v = 0.0;
    bool closure_ok = false;
};

ClosureReport solve_full_closure(const ClosureProblem& problem);

}  // namespace sgsim
