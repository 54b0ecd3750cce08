#pragma once

#include "mavel/config.hpp"
#include "mavel/functionals.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace mavel {

// =============================================================================
// Single-antenna DoA model
// =============================================================================
//
// y_m = alpha b_m(theta) s + n_m,   b_m(theta) = exp(-j 2 pi x(t_m) theta / lambda),
// n_m ~ CN(0, noise_power), |s|^2 = pilot_power.

struct SensingModel {
    double theta = 0.0;      ///< directional cosine
    double wavelength = 0.1; ///< [m]
    std::complex<double> gain{1.0, 0.0};
    double pilot_power = 1.0;
    double noise_power = 1.0;
};

SensingModel sensing_model(const ProblemConfig& cfg, double theta = 0.0);

std::vector<std::complex<double>> steering_vector(std::span<const double> positions,
                                                  const SensingModel& model);

/// (1/M) sum x_m^2 - ((1/M) sum x_m)^2.
double sample_variance(std::span<const double> positions);

/// sigma^2 lambda^2 / (8 pi^2 T P_s M |alpha|^2 var(x)). Throws InvalidArgument if var(x) = 0.
double crb(std::span<const double> positions, const SensingModel& model, double T);

/// Positions of a trajectory at M equally spaced snapshot times in [0, T] (linear interpolation).
std::vector<double> snapshot_positions(const SampledProfile& velocity, int snapshots);

/// Grid matched filter: argmax over theta of |b(theta)^H y|^2, plus one parabolic step.
class GridEstimator {
public:
    GridEstimator(std::span<const double> positions, double wavelength, int grid_points);

    [[nodiscard]] double estimate(std::span<const std::complex<double>> received,
                                  bool refine = true) const;
    [[nodiscard]] double step() const noexcept { return step_; }

private:
    Eigen::MatrixXcd conj_steering_; // grid x M
    double step_;
};

double ml_grid_estimate(std::span<const std::complex<double>> received,
                        std::span<const double> positions, const SensingModel& model,
                        int grid_points, bool refine = true);

struct MonteCarloReport {
    double snr_db = 0.0;
    int trials = 0;
    double mse = 0.0;
    double crb = 0.0; ///< independent of theta
    double ratio = 0.0;
};

/**
 * @brief Empirical MSE of the grid estimator against the CRB.
 *
 * Each trial draws theta uniformly in [-0.9, 0.9] and noise from its own RNG
 * seeded by (seed, trial), so results do not depend on the thread count. The
 * noise power is set from the SNR: P_s |alpha|^2 / sigma^2 = 10^(snr_db/10).
 */
MonteCarloReport monte_carlo_crb(std::span<const double> positions, const SensingModel& model,
                                 double T, double snr_db, int trials, int grid_points,
                                 std::uint64_t seed, int jobs = 1);

} // namespace mavel
