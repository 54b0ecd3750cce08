#include "mavel/errors.hpp"
#include "mavel/functionals.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace mavel;

namespace {

constexpr double pi = std::numbers::pi;

SampledProfile sample(double T, int points, auto&& f) {
    SampledProfile p;
    p.t = uniform_grid(T, points);
    for (double t : p.t) {
        p.v.push_back(f(t));
    }
    return p;
}

SampledProfile sine_profile(double amplitude = 2.0 * pi, int points = 4001) {
    return sample(1.0, points, [&](double t) { return amplitude * std::sin(pi * t); });
}

} // namespace

TEST(Functionals, ZeroVelocityStaysAtOrigin) {
    const auto x = integrate_trajectory(sample(1.0, 101, [](double) { return 0.0; }));
    for (double xi : x.v) {
        EXPECT_EQ(xi, 0.0);
    }
}

TEST(Functionals, ConstantVelocityIntegratesExactly) {
    const auto x = integrate_trajectory(sample(1.0, 1001, [](double) { return 1.0; }));
    EXPECT_EQ(x.v.front(), 0.0);
    EXPECT_NEAR(x.v.back(), 1.0, 1e-12);
}

TEST(Functionals, SineDisplacementMatchesAnalyticArea) {
    const auto x = integrate_trajectory(sine_profile());
    EXPECT_NEAR(x.v.back(), 4.0, 1e-6);
}

TEST(Functionals, PositionsAreNondecreasingForNonnegativeVelocity) {
    const auto x = integrate_trajectory(sine_profile(3.0, 501));
    for (std::size_t i = 1; i < x.size(); ++i) {
        EXPECT_GE(x.v[i], x.v[i - 1]);
    }
}

TEST(Functionals, RejectsNonMonotoneGrid) {
    SampledProfile p{{0.0, 0.5, 0.4, 1.0}, {1.0, 1.0, 1.0, 1.0}};
    EXPECT_THROW(integrate_trajectory(p), InvalidArgument);
    SampledProfile q{{0.1, 0.5, 1.0}, {1.0, 1.0, 1.0}};
    EXPECT_THROW(integrate_trajectory(q), InvalidArgument);
}

TEST(Functionals, ConstantPositionHasZeroVariance) {
    EXPECT_NEAR(variance_direct(sample(1.0, 101, [](double) { return 3.0; })), 0.0, 1e-15);
}

TEST(Functionals, RampPositionVariance) {
    const auto x = integrate_trajectory(sample(1.0, 4001, [](double) { return 1.0; }));
    // Trapezoid error on x^2 is h^2/6 with h = 2.5e-4.
    EXPECT_NEAR(variance_direct(x), 1.0 / 12.0, 2e-8);
}

TEST(Functionals, SinePositionVariance) {
    EXPECT_NEAR(variance_direct(integrate_trajectory(sine_profile())), 2.0, 1e-6);
}

TEST(Functionals, KernelValueAndSymmetry) {
    EXPECT_DOUBLE_EQ(bridge_kernel(0.5, 0.5, 1.0), 0.25);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 2.5);
    for (int i = 0; i < 100; ++i) {
        const double a = u(rng), b = u(rng);
        EXPECT_EQ(bridge_kernel(a, b, 2.5), bridge_kernel(b, a, 2.5));
    }
}

TEST(Functionals, KernelVarianceOfConstantVelocity) {
    EXPECT_NEAR(variance_via_kernel(sample(1.0, 4001, [](double) { return 1.0; })), 1.0 / 12.0,
                1e-6);
}

TEST(Functionals, KernelVarianceMatchesNestedQuadrature) {
    // Independent oracle: adaptive Gauss-Kronrod on the double integral of the kernel.
    using boost::math::quadrature::gauss_kronrod;
    const double T = 1.7;
    auto v = [&](double t) { return 1.0 + std::sin(pi * t / T) - 0.4 * std::cos(3.0 * t); };
    auto inner = [&](double u) {
        // The kernel has a kink at s = u, so split the inner integral there.
        auto f = [&](double s) { return bridge_kernel(u, s, T) * v(s); };
        return gauss_kronrod<double, 31>::integrate(f, 0.0, u, 10, 1e-13) +
               gauss_kronrod<double, 31>::integrate(f, u, T, 10, 1e-13);
    };
    const double oracle = gauss_kronrod<double, 31>::integrate(
        [&](double u) { return v(u) * inner(u); }, 0.0, T, 10, 1e-12);
    EXPECT_NEAR(variance_via_kernel(sample(T, 4001, v)), oracle, 1e-6 * oracle);
}

TEST(Functionals, KernelAndDirectVarianceAgree) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        double a[5];
        for (double& x : a) {
            x = coef(rng);
        }
        auto v = [&](double t) {
            double acc = 0.0;
            for (int n = 0; n < 5; ++n) {
                acc += a[n] * std::sin((n + 1) * pi * t);
            }
            return acc;
        };
        const auto p = sample(1.0, 4001, v);
        const double direct = variance_direct(integrate_trajectory(p));
        EXPECT_NEAR(variance_via_kernel(p), direct, 1e-6 * std::max(direct, 1e-12));
    }
}

TEST(Functionals, KernelVarianceIsNonnegativeAndQuadratic) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
        SampledProfile p;
        p.t = uniform_grid(1.0, 64);
        for (std::size_t i = 0; i < p.t.size(); ++i) {
            p.v.push_back(g(rng));
        }
        const double var = variance_via_kernel(p);
        EXPECT_GE(var, 0.0);
        SampledProfile doubled = p;
        for (double& x : doubled.v) {
            x *= 2.0;
        }
        EXPECT_NEAR(variance_via_kernel(doubled), 4.0 * var, 1e-12 * std::max(1.0, var));
        EXPECT_NEAR(variance_direct(integrate_trajectory(doubled)),
                    4.0 * variance_direct(integrate_trajectory(p)), 1e-12 * std::max(1.0, var));
    }
}

TEST(Functionals, EnergyOfZeroProfile) {
    EXPECT_EQ(energy(sample(1.0, 11, [](double) { return 0.0; }), ProblemConfig{}), 0.0);
}

TEST(Functionals, EnergyOfSineAtDefaults) {
    EXPECT_NEAR(energy(sine_profile(), ProblemConfig{}), 1.46667 * pi * pi, 1e-3);
}

TEST(Functionals, EnergyOfConstantWithTerminalKinetic) {
    const auto p = sample(1.0, 11, [](double) { return 4.0; });
    EXPECT_NEAR(energy(p, ProblemConfig{}, true), 10.4, 1e-12);
    EXPECT_NEAR(energy(p, ProblemConfig{}, false), 9.6, 1e-12);
}

TEST(Functionals, EnergyIsMonotoneInEachCoefficient) {
    const auto p = sample(1.0, 401, [](double t) { return 3.0 + std::sin(5.0 * t); });
    const ProblemConfig base;
    const double e0 = energy(p, base);
    for (auto field : {&ProblemConfig::alpha1, &ProblemConfig::alpha2, &ProblemConfig::m_a}) {
        ProblemConfig more = base;
        more.*field *= 1.5;
        EXPECT_GT(energy(p, more), e0);
    }
}

TEST(Functionals, SensingEfficiencyRatios) {
    EXPECT_NEAR(sensing_ee(2.0, 14.4767), 0.13815, 1e-4);
    EXPECT_NEAR(sensing_ee(2.9333, 48.0), 0.0611, 1e-4);
    for (double x : {1e-3, 0.7, 42.0}) {
        EXPECT_DOUBLE_EQ(sensing_ee(x, 2.0 * x), 0.5);
    }
}

TEST(Functionals, SensingEfficiencyRefusesZeroEnergy) {
    try {
        (void)sensing_ee(1.0, 0.0);
        FAIL() << "expected an unbounded-EE error";
    } catch (const DegenerateProfileError& e) {
        EXPECT_EQ(e.kind(), DegenerateProfileError::Kind::unbounded_ee);
    }
    try {
        (void)sensing_ee(0.0, 0.0);
        FAIL() << "expected a zero-profile error";
    } catch (const DegenerateProfileError& e) {
        EXPECT_EQ(e.kind(), DegenerateProfileError::Kind::zero_profile);
    }
}

TEST(Functionals, GridWithKnotsKeepsEndpointsAndOrder) {
    const std::vector<double> knots{0.3, 0.3 + 1e-9, 0.5, 1.0};
    const auto g = grid_with_knots(1.0, 11, knots);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) {
        EXPECT_GT(g[i], g[i - 1]);
    }
    EXPECT_NE(std::find(g.begin(), g.end(), 0.3 + 1e-9), g.end());
}
