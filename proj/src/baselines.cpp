#include "mavel/baselines.hpp"

#include "mavel/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mavel {

namespace {

// Piecewise-linear velocity through (knot, value) pairs, zero outside.
SampledProfile piecewise_linear(const ProblemConfig& cfg, std::span<const double> knots,
                                std::span<const double> values) {
    SampledProfile p;
    p.t = grid_with_knots(cfg.T, cfg.grid_points, knots);
    p.v.resize(p.t.size());
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        const double t = p.t[i];
        double v = 0.0;
        if (t >= knots.front() && t <= knots.back()) {
            std::size_t j = 1;
            while (j + 1 < knots.size() && t > knots[j]) {
                ++j;
            }
            const double span = knots[j] - knots[j - 1];
            const double w = span > 0.0 ? (t - knots[j - 1]) / span : 1.0;
            v = values[j - 1] + w * (values[j] - values[j - 1]);
        }
        p.v[i] = v;
    }
    return p;
}

} // namespace

SampledProfile sinusoidal_profile(const ProblemConfig& cfg) {
    cfg.validate();
    const double A = std::min(cfg.V_max, std::numbers::pi * cfg.L / (2.0 * cfg.T));
    SampledProfile p;
    p.t = uniform_grid(cfg.T, cfg.grid_points);
    p.v.resize(p.t.size());
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        p.v[i] = A * std::sin(std::numbers::pi * p.t[i] / cfg.T);
    }
    p.v.front() = 0.0;
    p.v.back() = 0.0;
    return p;
}

SampledProfile uniform_profile(const ProblemConfig& cfg) {
    cfg.validate();
    SampledProfile p;
    p.t = uniform_grid(cfg.T, cfg.grid_points);
    p.v.assign(p.t.size(), std::min(cfg.V_max, cfg.L / cfg.T));
    return p;
}

SampledProfile binary_profile(const ProblemConfig& cfg) {
    cfg.validate();
    const double T = cfg.T;
    const double tau = std::min(T, cfg.L / cfg.V_max);
    const double jump = 1e-9 * T;
    const double start = 0.5 * (T - tau);
    const double a0 = std::max(0.0, start - 0.5 * jump);
    const double b1 = std::min(T, start + tau + 0.5 * jump);
    const std::array<double, 4> knots{a0, a0 + jump, b1 - jump, b1};
    const std::array<double, 4> values{0.0, cfg.V_max, cfg.V_max, 0.0};
    return piecewise_linear(cfg, knots, values);
}

SampledProfile trapezoid_profile(const ProblemConfig& cfg, double t_ramp) {
    cfg.validate();
    if (!(t_ramp > 0.0) || !(t_ramp < 0.5 * cfg.T)) {
        throw InvalidArgument("trapezoid ramp time must lie in (0, T/2)");
    }
    const double cruise = cfg.L / (cfg.T - t_ramp);
    if (cruise > cfg.V_max) {
        std::ostringstream msg;
        msg << "trapezoid cruise speed " << cruise << " exceeds V_max " << cfg.V_max;
        throw InfeasibleError(msg.str());
    }
    const std::array<double, 4> knots{0.0, t_ramp, cfg.T - t_ramp, cfg.T};
    const std::array<double, 4> values{0.0, cruise, cruise, 0.0};
    return piecewise_linear(cfg, knots, values);
}

TrapezoidResult trapezoidal_profile(const ProblemConfig& cfg) {
    cfg.validate();
    const int K = cfg.trapezoid_candidates;
    TrapezoidResult best;
    bool found = false;
    for (int i = 1; i <= K; ++i) {
        const double t_ramp = 0.5 * cfg.T * i / (K + 1);
        if (cfg.L / (cfg.T - t_ramp) > cfg.V_max) {
            continue;
        }
        SampledProfile p = trapezoid_profile(cfg, t_ramp);
        const double ee = measure(p, cfg).ee;
        if (!found || ee > best.ee) {
            best = {std::move(p), t_ramp, ee};
            found = true;
        }
    }
    if (!found) {
        throw InfeasibleError("no trapezoid ramp time keeps the cruise speed within V_max");
    }
    return best;
}

} // namespace mavel
