#include "mavel/errors.hpp"
#include "mavel/optimizer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace mavel;

namespace {

constexpr double pi = std::numbers::pi;

const OptimizationResult& default_run() {
    static const OptimizationResult res = optimize(ProblemConfig{});
    return res;
}

double higher_mode_ratio(const Eigen::VectorXd& c) {
    return c.tail(c.size() - 1).squaredNorm() / (c(0) * c(0));
}

} // namespace

TEST(Initialize, DefaultsAndSpeedCap) {
    ProblemConfig cfg;
    const auto basis = build_basis(cfg.N, cfg.T);
    const InitialPoint init = initialize(cfg, *basis);
    EXPECT_NEAR(init.c(0), 4.0 * std::sqrt(0.5), 1e-12);
    EXPECT_NEAR(init.c(0), 2.82843, 1e-5);
    EXPECT_EQ(init.c.tail(cfg.N - 1).cwiseAbs().maxCoeff(), 0.0);
    const SpectralProfile p{init.c, basis};
    EXPECT_NEAR(spectral_variance(p), 8.0 / (pi * pi), 1e-12);
    EXPECT_NEAR(init.xi, spectral_variance(p) / spectral_energy(p, cfg), 1e-15);

    cfg.V_max = 2.0;
    EXPECT_NEAR(initialize(cfg, *basis).c(0), 2.0 * std::sqrt(0.5), 1e-12);
}

TEST(ScaInner, LinearRegimeKeepsOnlyTheFundamentalMode) {
    ProblemConfig cfg;
    cfg.alpha2 = 0.0;
    const auto basis = build_basis(cfg.N, cfg.T);
    const auto maps = build_constraint_maps(cfg, *basis);
    const double xi = basis->eigenvalues()(0) / cfg.alpha1;
    const InnerResult r = sca_inner(initialize(cfg, *basis).c, xi, cfg, basis, maps);
    ASSERT_GT(std::abs(r.c(0)), 0.0);
    for (int n = 1; n < cfg.N; ++n) {
        EXPECT_LE(std::abs(r.c(n)), 1e-6 * std::abs(r.c(0))) << "mode " << n + 1;
    }
}

TEST(ScaInner, InfiniteToleranceStopsAfterOneSolve) {
    ProblemConfig cfg;
    cfg.eps_in = std::numeric_limits<double>::infinity();
    const auto basis = build_basis(cfg.N, cfg.T);
    const auto maps = build_constraint_maps(cfg, *basis);
    const InitialPoint init = initialize(cfg, *basis);
    const InnerResult r = sca_inner(init.c, init.xi, cfg, basis, maps);
    EXPECT_EQ(r.iterations, 1);
    ASSERT_EQ(r.statuses.size(), 1u);
    EXPECT_EQ(r.statuses[0], cone::Status::optimal);
}

TEST(ScaInner, InfeasibleQosFloorPropagates) {
    ProblemConfig cfg;
    cfg.eta = 1.0;
    const auto basis = build_basis(cfg.N, cfg.T);
    const auto maps = build_constraint_maps(cfg, *basis);
    const InitialPoint init = initialize(cfg, *basis);
    EXPECT_THROW(sca_inner(init.c, init.xi, cfg, basis, maps), InfeasibleError);
    EXPECT_THROW(optimize(cfg), InfeasibleError);
}

TEST(Optimize, DefaultEfficiencyBand) {
    const auto& res = default_run();
    EXPECT_GE(res.ee, 0.21);
    EXPECT_LE(res.ee, 0.27);
}

TEST(Optimize, TraceContract) {
    const ProblemConfig cfg;
    const auto& res = default_run();
    const auto& rec = res.trace.records;
    ASSERT_GE(rec.size(), 2u);
    EXPECT_EQ(rec.front().iter, 0);
    EXPECT_EQ(rec.front().inner_iters, 0);
    for (std::size_t i = 1; i < rec.size(); ++i) {
        EXPECT_EQ(rec[i].iter, static_cast<int>(i));
        EXPECT_GE(rec[i].inner_iters, 1);
        EXPECT_LE(rec[i].inner_iters, cfg.max_inner);
        EXPECT_EQ(rec[i].statuses.size(), static_cast<std::size_t>(rec[i].inner_iters));
    }
    EXPECT_LE(std::abs(rec.back().xi - rec[rec.size() - 2].xi), cfg.eps_out);
    EXPECT_EQ(res.ee, rec.back().xi);
}

TEST(Optimize, FinalXiIsSelfConsistent) {
    const auto& res = default_run();
    EXPECT_NEAR(res.ee, res.variance / res.energy, 1e-6 * res.ee);
    const ProfileMetrics m = measure_spectral(res.profile, ProblemConfig{});
    EXPECT_NEAR(m.ee, res.ee, 1e-6 * res.ee);
}

TEST(Optimize, QuadratureAgreesWithSpectralForms) {
    const auto& res = default_run();
    const ProblemConfig cfg;
    const double var = spectral_variance(res.profile);
    const double en = spectral_energy(res.profile, cfg);
    EXPECT_NEAR(res.variance, var, 1e-6 * var);
    EXPECT_NEAR(res.energy, en, 1e-6 * en);
}

TEST(Optimize, ReturnedProfileIsAdmissible) {
    const ProblemConfig cfg;
    const auto& res = default_run();
    const auto v = evaluate_profile(res.profile, uniform_grid(cfg.T, cfg.grid_points));
    for (double x : v.v) {
        EXPECT_GE(x, -1e-6);
        EXPECT_LE(x, cfg.V_max + 1e-6);
    }
    EXPECT_LE(distance(v), cfg.L + 1e-6);
    EXPECT_GE(spectral_variance(res.profile), cfg.eta * cfg.L * cfg.L / 4.0 - 1e-6);
}

TEST(Optimize, RunsAreBitForBitDeterministic) {
    ProblemConfig cfg;
    cfg.N = 5;
    const auto a = optimize(cfg);
    const auto b = optimize(cfg);
    EXPECT_EQ(a.profile.c, b.profile.c);
    ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
        EXPECT_EQ(a.trace.records[i].xi, b.trace.records[i].xi);
        EXPECT_EQ(a.trace.records[i].inner_step_norm, b.trace.records[i].inner_step_norm);
    }
}

TEST(Optimize, WeakDragConcentratesOnFundamentalMode) {
    ProblemConfig cfg;
    cfg.alpha2 = 1e-3;
    EXPECT_LE(higher_mode_ratio(optimize(cfg).profile.c), 1e-4);
}

TEST(Optimize, LinearRegimeCeiling) {
    ProblemConfig cfg;
    cfg.alpha2 = 0.0;
    cfg.eta = 0.01;
    const double ceiling = 1.0 / (cfg.alpha1 * pi * pi);
    const auto res = optimize(cfg);
    EXPECT_LE(res.ee, ceiling * (1.0 + 1e-6));
    EXPECT_GE(res.ee, 0.99 * ceiling);
}

TEST(Optimize, OuterBudgetExhaustionCarriesTrace) {
    ProblemConfig cfg;
    cfg.max_outer = 1;
    try {
        (void)optimize(cfg);
        FAIL() << "expected non-convergence";
    } catch (const DinkelbachNotConverged& e) {
        EXPECT_EQ(e.trace().records.size(), 2u);
        EXPECT_EQ(e.last_coefficients().size(), cfg.N);
    }
}
