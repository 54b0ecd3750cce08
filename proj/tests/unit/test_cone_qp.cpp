#include "mavel/cone_qp.hpp"
#include "mavel/errors.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mavel;
using namespace mavel::cone;

namespace {

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int d) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd B(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            B(i, j) = g(rng);
        }
    }
    return 0.5 * (B + B.transpose());
}

} // namespace

TEST(Svec, RoundTripAndTraceInnerProduct) {
    std::mt19937_64 rng(1);
    for (int d = 1; d <= 6; ++d) {
        const Eigen::MatrixXd X = random_symmetric(rng, d);
        const Eigen::MatrixXd Y = random_symmetric(rng, d);
        const Eigen::VectorXd x = svec(X);
        ASSERT_EQ(x.size(), svec_size(d));
        EXPECT_LE((smat(x, d) - X).cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_NEAR(x.dot(svec(Y)), (X * Y).trace(), 1e-12);
    }
}

TEST(Svec, ConeHelpers) {
    ConeDims dims{2, {3}};
    EXPECT_EQ(dims.dimension(), 2 + 6);
    EXPECT_EQ(dims.degree(), 5);
    const Eigen::VectorXd e = cone_identity(dims);
    EXPECT_NEAR(min_cone_eigenvalue(e, dims), 1.0, 1e-15);
    Eigen::VectorXd v = e;
    v(1) = -0.25;
    EXPECT_NEAR(min_cone_eigenvalue(v, dims), -0.25, 1e-15);
}

TEST(ConeQp, BoxedQuadraticRecoversUnconstrainedMinimiser) {
    std::mt19937_64 rng(2);
    const int n = 4;
    Eigen::MatrixXd B = random_symmetric(rng, n);
    ConeProgram prog;
    prog.P = B * B + Eigen::MatrixXd::Identity(n, n);
    prog.q = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
    prog.G = -Eigen::MatrixXd::Identity(n, n);
    prog.h = Eigen::VectorXd::Constant(n, 100.0);
    prog.cones.nonneg = n;
    const Solution sol = solve(prog);
    ASSERT_EQ(sol.status, Status::optimal);
    const Eigen::VectorXd want = -prog.P.ldlt().solve(prog.q);
    EXPECT_LE((sol.x - want).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(ConeQp, LinearProgramVertex) {
    ConeProgram prog;
    prog.q = Eigen::Vector2d(1.0, 2.0);
    prog.A = Eigen::RowVector2d(1.0, 1.0);
    prog.b = Eigen::VectorXd::Ones(1);
    prog.G = -Eigen::Matrix2d::Identity();
    prog.h = Eigen::Vector2d::Zero();
    prog.cones.nonneg = 2;
    const Solution sol = solve(prog);
    ASSERT_EQ(sol.status, Status::optimal);
    EXPECT_NEAR(sol.x(0), 1.0, 1e-7);
    EXPECT_NEAR(sol.x(1), 0.0, 1e-7);
    EXPECT_NEAR(sol.primal_objective, 1.0, 1e-7);
}

TEST(ConeQp, TraceConstrainedSdpFindsSmallestEigenvalue) {
    std::mt19937_64 rng(3);
    for (int d : {2, 3, 5}) {
        const Eigen::MatrixXd C = random_symmetric(rng, d);
        const int k = svec_size(d);
        ConeProgram prog;
        prog.q = svec(C);
        prog.A = svec(Eigen::MatrixXd::Identity(d, d)).transpose();
        prog.b = Eigen::VectorXd::Ones(1);
        prog.G = -Eigen::MatrixXd::Identity(k, k);
        prog.h = Eigen::VectorXd::Zero(k);
        prog.cones.psd = {d};
        const Solution sol = solve(prog);
        ASSERT_EQ(sol.status, Status::optimal);
        const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(C).eigenvalues()(0);
        EXPECT_NEAR(sol.primal_objective, lo, 1e-7);
    }
}

TEST(ConeQp, PsdProjectionClipsEigenvalues) {
    // argmin 1/2 ||X - M||_F^2 over the PSD cone keeps the nonnegative spectrum of M.
    std::mt19937_64 rng(4);
    const int d = 4, k = svec_size(d);
    const Eigen::MatrixXd M = random_symmetric(rng, d);
    ConeProgram prog;
    prog.P = Eigen::MatrixXd::Identity(k, k);
    prog.q = -svec(M);
    prog.G = -Eigen::MatrixXd::Identity(k, k);
    prog.h = Eigen::VectorXd::Zero(k);
    prog.cones.psd = {d};
    const Solution sol = solve(prog);
    ASSERT_EQ(sol.status, Status::optimal);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    const Eigen::MatrixXd want =
        es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).asDiagonal() * es.eigenvectors().transpose();
    EXPECT_LE((smat(sol.x, d) - want).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LE(sol.dual_residual, 1e-8);
    EXPECT_LE(sol.primal_residual, 1e-8);
}

TEST(ConeQp, RepeatedSolvesAreIdentical) {
    std::mt19937_64 rng(5);
    const int d = 3, k = svec_size(d);
    ConeProgram prog;
    prog.P = Eigen::MatrixXd::Identity(k, k);
    prog.q = -svec(random_symmetric(rng, d));
    prog.G = -Eigen::MatrixXd::Identity(k, k);
    prog.h = Eigen::VectorXd::Zero(k);
    prog.cones.psd = {d};
    const Solution a = solve(prog), b = solve(prog);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(ConeQp, IterationLimitIsReported) {
    std::mt19937_64 rng(6);
    const int d = 4, k = svec_size(d);
    ConeProgram prog;
    prog.P = Eigen::MatrixXd::Identity(k, k);
    prog.q = -svec(random_symmetric(rng, d));
    prog.G = -Eigen::MatrixXd::Identity(k, k);
    prog.h = Eigen::VectorXd::Zero(k);
    prog.cones.psd = {d};
    Settings s;
    s.max_iter = 1;
    EXPECT_EQ(solve(prog, s).status, Status::iteration_limit);
}

TEST(ConeQp, RejectsInconsistentShapes) {
    ConeProgram prog;
    prog.q = Eigen::Vector2d::Zero();
    prog.G = Eigen::MatrixXd::Identity(3, 3);
    prog.h = Eigen::Vector3d::Zero();
    prog.cones.nonneg = 3;
    EXPECT_THROW(solve(prog), InvalidArgument);
}

TEST(PhaseOne, SeparatesFeasibleFromInfeasible) {
    // x >= 1 together with x <= u.
    for (double u : {2.0, 0.0}) {
        ConeProgram prog;
        prog.q = Eigen::VectorXd::Zero(1);
        prog.G = Eigen::Vector2d(-1.0, 1.0);
        prog.h = Eigen::Vector2d(-1.0, u);
        prog.cones.nonneg = 2;
        const PhaseOne p = phase_one(prog);
        ASSERT_EQ(p.status, Status::optimal);
        if (u > 1.0) {
            EXPECT_LT(p.violation, 0.0);
            EXPECT_GE(p.x(0), 1.0 - 1e-9);
            EXPECT_LE(p.x(0), u + 1e-9);
        } else {
            EXPECT_NEAR(p.violation, 0.5, 1e-7);
        }
    }
}

TEST(PhaseOne, DetectsPsdInfeasibility) {
    // X in S^2_+ with X_00 = -1 is empty.
    ConeProgram prog;
    prog.q = Eigen::VectorXd::Zero(3);
    prog.A = Eigen::RowVector3d(1.0, 0.0, 0.0);
    prog.b = -Eigen::VectorXd::Ones(1);
    prog.G = -Eigen::Matrix3d::Identity();
    prog.h = Eigen::Vector3d::Zero();
    prog.cones.psd = {2};
    const PhaseOne p = phase_one(prog);
    ASSERT_EQ(p.status, Status::optimal);
    EXPECT_GT(p.violation, 0.5);
}
