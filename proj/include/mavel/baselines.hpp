#pragma once

#include "mavel/config.hpp"
#include "mavel/functionals.hpp"

namespace mavel {

// =============================================================================
// Reference motion profiles
// =============================================================================
//
// All profiles are sampled on cfg.grid_points uniform nodes, with extra knots
// inserted at kinks and jumps so the trapezoid rule integrates them without
// smearing.

/// A sin(pi t / T) with A = min(V_max, pi L / (2T)): the optimum when drag is linear.
SampledProfile sinusoidal_profile(const ProblemConfig& cfg);

/// Constant min(V_max, L/T). Starts at full speed, so v(0) != 0 by construction.
SampledProfile uniform_profile(const ProblemConfig& cfg);

/// Dwell, sprint at V_max for tau = min(T, L/V_max), dwell; centred in [0, T].
/// Each jump is a linear ramp of 1e-9 T.
SampledProfile binary_profile(const ProblemConfig& cfg);

/// Symmetric accelerate / cruise / decelerate with ramp time t_ramp in (0, T/2)
/// and cruise speed L / (T - t_ramp). Throws InfeasibleError if that exceeds V_max.
SampledProfile trapezoid_profile(const ProblemConfig& cfg, double t_ramp);

struct TrapezoidResult {
    SampledProfile profile;
    double ramp_time = 0.0;
    double ee = 0.0;
};

/// Best ramp time over cfg.trapezoid_candidates equally spaced points in (0, T/2).
TrapezoidResult trapezoidal_profile(const ProblemConfig& cfg);

} // namespace mavel
