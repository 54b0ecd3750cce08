#pragma once

#include <Eigen/Dense>

#include <vector>

namespace mavel::cone {

// =============================================================================
// Dense conic quadratic programs
// =============================================================================
//
//   minimize    1/2 x' P x + q' x
//   subject to  A x = b
//               G x + s = h,   s in R_+^l x S_+^{d_1} x ... x S_+^{d_r}
//
// PSD blocks are stored as scaled lower-triangle vectors (svec): off-diagonal
// entries carry a factor sqrt(2) so that svec(X)'svec(Y) = tr(XY).

struct ConeDims {
    int nonneg = 0;
    std::vector<int> psd;

    [[nodiscard]] int dimension() const;  ///< length of s and z
    [[nodiscard]] int degree() const;     ///< nonneg + sum of block orders
};

struct ConeProgram {
    Eigen::MatrixXd P; ///< n x n PSD; an empty matrix means P = 0
    Eigen::VectorXd q;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::MatrixXd G;
    Eigen::VectorXd h;
    ConeDims cones;

    [[nodiscard]] int variables() const { return static_cast<int>(q.size()); }
};

struct Settings {
    double feastol = 1e-9; ///< primal/dual residual, relative to max(1, ||data||)
    double abstol = 1e-9;  ///< duality gap
    double reltol = 1e-9;  ///< relative duality gap
    int max_iter = 100;
    double step_fraction = 0.99;
};

enum class Status { optimal, infeasible, iteration_limit, numerical_failure };

const char* to_string(Status s);

struct Solution {
    Status status = Status::numerical_failure;
    Eigen::VectorXd x, y, s, z;
    double primal_objective = 0.0;
    double gap = 0.0;
    double primal_residual = 0.0; ///< max(||Ax-b||/max(1,||b||), ||Gx+s-h||/max(1,||h||))
    double dual_residual = 0.0;   ///< ||Px+q+A'y+G'z|| / max(1,||q||)
    int iterations = 0;
};

/// Primal-dual path-following method with Nesterov-Todd scaling and Mehrotra
/// correction. Never reports `infeasible` itself; see `phase_one`.
Solution solve(const ConeProgram& prog, const Settings& settings = {});

/// Outcome of  min t  s.t.  A x = b,  h - G x + t e in K,  t >= -1.
struct PhaseOne {
    Status status = Status::numerical_failure;
    double violation = 0.0; ///< optimal t: <= 0 means (strictly) feasible
    Eigen::VectorXd x;
    Eigen::VectorXd s;      ///< h - G x (not shifted by t)
    int iterations = 0;
};

PhaseOne phase_one(const ConeProgram& prog, const Settings& settings = {});

// -----------------------------------------------------------------------------
// svec helpers
// -----------------------------------------------------------------------------

int svec_size(int order);
Eigen::VectorXd svec(const Eigen::MatrixXd& X);
Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int order);

/// Smallest eigenvalue over all cone blocks (nonnegative entries count as 1x1 blocks).
double min_cone_eigenvalue(const Eigen::VectorXd& v, const ConeDims& cones);

/// Identity element e of the cone.
Eigen::VectorXd cone_identity(const ConeDims& cones);

} // namespace mavel::cone
