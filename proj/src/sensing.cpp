#include "mavel/sensing.hpp"

#include "mavel/errors.hpp"
#include "mavel/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mavel {

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

SensingModel sensing_model(const ProblemConfig& cfg, double theta) {
    SensingModel m;
    m.theta = theta;
    m.wavelength = cfg.wavelength;
    m.gain = {cfg.gain, 0.0};
    m.pilot_power = cfg.pilot_power;
    m.noise_power = cfg.noise_power;
    return m;
}

std::vector<std::complex<double>> steering_vector(std::span<const double> positions,
                                                  const SensingModel& model) {
    if (std::abs(model.theta) > 1.0) {
        throw InvalidArgument("directional cosine must lie in [-1, 1]");
    }
    std::vector<std::complex<double>> b(positions.size());
    for (std::size_t m = 0; m < positions.size(); ++m) {
        b[m] = std::polar(1.0, -2.0 * pi * positions[m] * model.theta / model.wavelength);
    }
    return b;
}

double sample_variance(std::span<const double> positions) {
    if (positions.empty()) {
        return 0.0;
    }
    const double M = static_cast<double>(positions.size());
    double mean = 0.0;
    for (double x : positions) {
        mean += x;
    }
    mean /= M;
    double acc = 0.0;
    for (double x : positions) {
        acc += (x - mean) * (x - mean);
    }
    return acc / M;
}

double crb(std::span<const double> positions, const SensingModel& model, double T) {
    const double var = sample_variance(positions);
    double scale = 0.0;
    for (double x : positions) {
        scale = std::max(scale, std::abs(x));
    }
    // Round-off leaves ~eps^2 scale^2 behind for coincident positions.
    if (!(var > 1e-24 * std::max(scale * scale, 1e-300))) {
        throw InvalidArgument("CRB is unbounded: antenna positions have zero variance");
    }
    const double M = static_cast<double>(positions.size());
    const double lam = model.wavelength;
    return model.noise_power * lam * lam /
           (8.0 * pi * pi * T * model.pilot_power * M * std::norm(model.gain) * var);
}

std::vector<double> snapshot_positions(const SampledProfile& velocity, int snapshots) {
    if (snapshots < 2) {
        throw InvalidArgument("at least two snapshots are required");
    }
    const SampledProfile x = integrate_trajectory(velocity);
    const std::vector<double> times = uniform_grid(x.duration(), snapshots);
    std::vector<double> out(times.size());
    std::size_t j = 1;
    for (std::size_t m = 0; m < times.size(); ++m) {
        while (j + 1 < x.t.size() && x.t[j] < times[m]) {
            ++j;
        }
        const double w = (times[m] - x.t[j - 1]) / (x.t[j] - x.t[j - 1]);
        out[m] = x.v[j - 1] + w * (x.v[j] - x.v[j - 1]);
    }
    return out;
}

GridEstimator::GridEstimator(std::span<const double> positions, double wavelength,
                             int grid_points)
    : conj_steering_(grid_points, static_cast<Eigen::Index>(positions.size())),
      step_(2.0 / (grid_points - 1)) {
    if (grid_points < 3) {
        throw InvalidArgument("theta grid needs at least three points");
    }
    for (int i = 0; i < grid_points; ++i) {
        const double theta = -1.0 + i * step_;
        for (std::size_t m = 0; m < positions.size(); ++m) {
            conj_steering_(i, static_cast<Eigen::Index>(m)) =
                std::polar(1.0, 2.0 * pi * positions[m] * theta / wavelength);
        }
    }
}

double GridEstimator::estimate(std::span<const std::complex<double>> received, bool refine) const {
    if (static_cast<Eigen::Index>(received.size()) != conj_steering_.cols()) {
        throw InvalidArgument("received vector length does not match the snapshot count");
    }
    const Eigen::Map<const Eigen::VectorXcd> y(received.data(),
                                               static_cast<Eigen::Index>(received.size()));
    const Eigen::VectorXd spectrum = (conj_steering_ * y).cwiseAbs2();
    Eigen::Index best = 0;
    spectrum.maxCoeff(&best);
    double theta = -1.0 + static_cast<double>(best) * step_;
    if (refine && best > 0 && best + 1 < spectrum.size()) {
        const double fm = spectrum(best - 1);
        const double f0 = spectrum(best);
        const double fp = spectrum(best + 1);
        const double denom = fm - 2.0 * f0 + fp;
        if (denom < 0.0) {
            theta += std::clamp(0.5 * (fm - fp) / denom, -0.5, 0.5) * step_;
        }
    }
    return theta;
}

double ml_grid_estimate(std::span<const std::complex<double>> received,
                        std::span<const double> positions, const SensingModel& model,
                        int grid_points, bool refine) {
    return GridEstimator(positions, model.wavelength, grid_points).estimate(received, refine);
}

MonteCarloReport monte_carlo_crb(std::span<const double> positions, const SensingModel& model,
                                 double T, double snr_db, int trials, int grid_points,
                                 std::uint64_t seed, int jobs) {
    if (trials < 1) {
        throw InvalidArgument("Monte-Carlo needs at least one trial");
    }
    SensingModel base = model;
    base.noise_power = model.pilot_power * std::norm(model.gain) / std::pow(10.0, snr_db / 10.0);
    const GridEstimator estimator(positions, model.wavelength, grid_points);
    const double bound = crb(positions, base, T);
    const std::complex<double> amplitude = model.gain * std::sqrt(model.pilot_power);
    const double sigma = std::sqrt(base.noise_power / 2.0);

    std::vector<double> sq_err(static_cast<std::size_t>(trials));
    parallel_for(sq_err.size(), jobs, [&](std::size_t trial) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(trial)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> angle(-0.9, 0.9);
        std::normal_distribution<double> noise(0.0, sigma);

        SensingModel m = base;
        m.theta = angle(rng);
        const auto b = steering_vector(positions, m);
        std::vector<std::complex<double>> y(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
            const double re = noise(rng);
            const double im = noise(rng);
            y[i] = amplitude * b[i] + std::complex<double>(re, im);
        }
        const double err = estimator.estimate(y) - m.theta;
        sq_err[trial] = err * err;
    });

    MonteCarloReport r;
    r.snr_db = snr_db;
    r.trials = trials;
    for (double e : sq_err) {
        r.mse += e;
    }
    r.mse /= trials;
    r.crb = bound;
    r.ratio = r.mse / bound;
    return r;
}

} // namespace mavel
