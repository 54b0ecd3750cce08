#pragma once

#include "mavel/cone_qp.hpp"
#include "mavel/config.hpp"
#include "mavel/sos.hpp"
#include "mavel/spectral.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace mavel {

// =============================================================================
// SCA subproblem over (c, Gram blocks)
// =============================================================================

/// a' c <= bound.
struct LinearInequality {
    Eigen::VectorXd a;
    double bound = 0.0;
};

/**
 * @brief One convex subproblem of the inner loop.
 *
 * minimize 1/2 || f + J (c - point) ||^2 over c and the Gram blocks of every SOS
 * set, subject to the sets' coefficient equalities, the linear inequalities and
 * PSD blocks. An empty `jacobian` turns the problem into a pure feasibility check;
 * `fixed_c` pins c through extra equalities.
 */
struct ConicSubproblem {
    Eigen::MatrixXd jacobian;
    Eigen::VectorXd residual;
    Eigen::VectorXd point;
    std::vector<SosConstraintSet> sos;
    std::vector<LinearInequality> inequalities;
    std::optional<Eigen::VectorXd> fixed_c;
    int coefficients = 0; ///< length of c
};

struct SolveResult {
    cone::Status status = cone::Status::numerical_failure;
    Eigen::VectorXd c;
    std::vector<std::vector<Eigen::MatrixXd>> grams; ///< per SOS set, per block
    double equality_residual = 0.0;                  ///< relative to max(1, ||rhs||)
    double min_eigenvalue = 0.0;
    double min_slack = 0.0;
    double objective = 0.0;
    int iterations = 0;
    double wall_seconds = 0.0;
};

SolveResult solve(const ConicSubproblem& sub, const cone::Settings& settings = {});

/// Gauss-Newton surrogate at c_k with the distance row and the QoS row linearised at c_k.
ConicSubproblem make_sca_subproblem(const Eigen::VectorXd& c_k, const ResidualContext& ctx,
                                    const ProblemConfig& cfg, const SosConstraintSet& lower,
                                    const SosConstraintSet& upper);

cone::Settings solver_settings(const ProblemConfig& cfg);

} // namespace mavel
