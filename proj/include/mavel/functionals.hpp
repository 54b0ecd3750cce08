#pragma once

#include "mavel/config.hpp"

#include <span>
#include <vector>

namespace mavel {

// =============================================================================
// Sampled profiles
// =============================================================================

/**
 * @brief A scalar signal on a strictly increasing time grid over [0, T].
 *
 * Used for velocities v(t) and, after integration, positions x(t).
 */
struct SampledProfile {
    std::vector<double> t;
    std::vector<double> v;

    [[nodiscard]] double duration() const { return t.empty() ? 0.0 : t.back(); }
    [[nodiscard]] std::size_t size() const { return t.size(); }

    /// Throws InvalidArgument unless t[0] = 0, t is strictly increasing and sizes match.
    void check() const;
};

/// Uniform grid of `points` nodes on [0, T] with exact endpoints.
std::vector<double> uniform_grid(double T, int points);

/// Uniform grid with additional knots merged in (duplicates within 1e-12*T dropped).
std::vector<double> grid_with_knots(double T, int points, std::span<const double> knots);

/// Composite trapezoid rule over an arbitrary (non-uniform) grid.
double trapezoid(std::span<const double> t, std::span<const double> f);

// =============================================================================
// Functionals
// =============================================================================

/// x(t) = \int_0^t v, cumulative trapezoid; x[0] = 0.
SampledProfile integrate_trajectory(const SampledProfile& velocity);

/// (1/T)\int x^2 - ((1/T)\int x)^2 by quadrature.
double variance_direct(const SampledProfile& positions);

/// Brownian-bridge kernel (T min(u,s) - u s) / T^2.
double bridge_kernel(double u, double s, double T);

/// \iint v(u) K(u,s) v(s) du ds, integrating K exactly against the piecewise-linear
/// interpolant of the samples (the interpolant the trapezoid rule integrates).
double variance_via_kernel(const SampledProfile& velocity);

/// 1/2 m_a v(T)^2 (optional) + \int alpha1 v^2 + alpha2 v^3.
double energy(const SampledProfile& velocity, const ProblemConfig& cfg,
              bool include_terminal_kinetic = true);

/// Variance-to-energy ratio. Zero energy is refused rather than turned into inf/NaN.
double sensing_ee(double variance, double energy);

/// Distance travelled, \int v dt.
double distance(const SampledProfile& velocity);

struct ProfileMetrics {
    double variance = 0.0;
    double energy = 0.0;
    double ee = 0.0;
    double distance = 0.0;
};

/// Quadrature variance, energy (terminal term per cfg), EE and distance of a velocity profile.
ProfileMetrics measure(const SampledProfile& velocity, const ProblemConfig& cfg);

} // namespace mavel
