#include "mavel/functionals.hpp"

#include "mavel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mavel {

void SampledProfile::check() const {
    if (t.size() < 2) {
        throw InvalidArgument("sampled profile needs at least two grid points");
    }
    if (t.size() != v.size()) {
        throw InvalidArgument("sampled profile: " + std::to_string(t.size()) + " times vs " +
                              std::to_string(v.size()) + " samples");
    }
    if (t.front() != 0.0) {
        throw InvalidArgument("sampled profile must start at t = 0");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) {
            throw InvalidArgument("time grid is not strictly increasing at index " +
                                  std::to_string(i));
        }
    }
}

std::vector<double> uniform_grid(double T, int points) {
    if (!(T > 0.0) || points < 2) {
        throw InvalidArgument("uniform_grid requires T > 0 and at least two points");
    }
    std::vector<double> t(static_cast<std::size_t>(points));
    const double n = points - 1;
    for (int i = 0; i < points; ++i) {
        t[static_cast<std::size_t>(i)] = T * (i / n);
    }
    t.back() = T;
    return t;
}

std::vector<double> grid_with_knots(double T, int points, std::span<const double> knots) {
    std::vector<double> t = uniform_grid(T, points);
    for (double k : knots) {
        if (k > 0.0 && k < T) {
            t.push_back(k);
        }
    }
    std::sort(t.begin(), t.end());
    const double tol = 1e-12 * T;
    std::vector<double> merged;
    merged.reserve(t.size());
    for (double x : t) {
        if (merged.empty() || x - merged.back() > tol) {
            merged.push_back(x);
        }
    }
    merged.back() = T;
    return merged;
}

double trapezoid(std::span<const double> t, std::span<const double> f) {
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        acc += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    }
    return acc;
}

SampledProfile integrate_trajectory(const SampledProfile& velocity) {
    velocity.check();
    SampledProfile x{velocity.t, std::vector<double>(velocity.size(), 0.0)};
    for (std::size_t i = 1; i < velocity.size(); ++i) {
        x.v[i] = x.v[i - 1] +
                 0.5 * (velocity.t[i] - velocity.t[i - 1]) * (velocity.v[i] + velocity.v[i - 1]);
    }
    return x;
}

double variance_direct(const SampledProfile& positions) {
    positions.check();
    const double T = positions.duration();
    std::vector<double> sq(positions.size());
    std::transform(positions.v.begin(), positions.v.end(), sq.begin(),
                   [](double x) { return x * x; });
    const double mean = trapezoid(positions.t, positions.v) / T;
    const double mean_sq = trapezoid(positions.t, sq) / T;
    return std::max(0.0, mean_sq - mean * mean);
}

double bridge_kernel(double u, double s, double T) {
    return (T * std::min(u, s) - u * s) / (T * T);
}

double variance_via_kernel(const SampledProfile& velocity) {
    velocity.check();
    const auto& t = velocity.t;
    const auto& v = velocity.v;
    const double T = velocity.duration();

    // K is integrated exactly against the piecewise-linear interpolant of v, the
    // same interpolant the trapezoid rule integrates. Splitting
    // K = min(u,s)/T - us/T^2 and writing min(u,s) = \int 1[r<u] 1[r<s] dr gives
    //   \iint v K v = (1/T) \int_0^T R(r)^2 dr - ((1/T) \int_0^T u v(u) du)^2,
    // with R(r) = \int_r^T v, so each term costs O(n).
    double total = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        total += 0.5 * (t[i] - t[i - 1]) * (v[i] + v[i - 1]);
    }
    double tail = total; // R at the left end of the current panel
    double min_part = 0.0;
    double moment = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double h = t[i] - t[i - 1];
        const double a = v[i - 1];
        const double b = v[i];
        // R(t_{i-1} + h s) = A + B s + C s^2 on the panel.
        const double A = tail;
        const double B = -h * a;
        const double C = -0.5 * h * (b - a);
        min_part += h * (A * A + B * B / 3.0 + C * C / 5.0 + A * B + 2.0 * A * C / 3.0 +
                         0.5 * B * C);
        moment += h * (0.5 * t[i - 1] * (a + b) + h * (a / 6.0 + b / 3.0));
        tail = A + B + C;
    }
    return std::max(0.0, min_part / T - moment * moment / (T * T));
}

double energy(const SampledProfile& velocity, const ProblemConfig& cfg,
              bool include_terminal_kinetic) {
    velocity.check();
    std::vector<double> power(velocity.size());
    for (std::size_t i = 0; i < velocity.size(); ++i) {
        const double v = velocity.v[i];
        power[i] = cfg.alpha1 * v * v + cfg.alpha2 * v * v * v;
    }
    double e = trapezoid(velocity.t, power);
    if (include_terminal_kinetic) {
        const double vT = velocity.v.back();
        e += 0.5 * cfg.m_a * vT * vT;
    }
    return e;
}

double sensing_ee(double variance, double energy) {
    if (energy == 0.0) {
        if (variance > 0.0) {
            throw DegenerateProfileError(DegenerateProfileError::Kind::unbounded_ee,
                                         "zero energy with positive variance: EE is unbounded");
        }
        throw DegenerateProfileError(DegenerateProfileError::Kind::zero_profile,
                                     "zero profile: variance and energy both vanish");
    }
    if (energy < 0.0) {
        throw InvalidArgument("negative energy " + std::to_string(energy));
    }
    return variance / energy;
}

double distance(const SampledProfile& velocity) {
    velocity.check();
    return trapezoid(velocity.t, velocity.v);
}

ProfileMetrics measure(const SampledProfile& velocity, const ProblemConfig& cfg) {
    ProfileMetrics m;
    m.variance = variance_direct(integrate_trajectory(velocity));
    m.energy = energy(velocity, cfg, cfg.include_terminal_kinetic);
    m.ee = sensing_ee(m.variance, m.energy);
    m.distance = distance(velocity);
    return m;
}

} // namespace mavel
