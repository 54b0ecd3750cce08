#pragma once

#include "mavel/cone_qp.hpp"
#include "mavel/config.hpp"
#include "mavel/errors.hpp"
#include "mavel/sos.hpp"
#include "mavel/spectral.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace mavel {

// =============================================================================
// Dinkelbach outer loop with a Gauss-Newton / SCA inner loop
// =============================================================================

/// One outer iteration. Row 0 describes the initial point (no inner solves).
struct OuterRecord {
    int iter = 0;
    double xi = 0.0;
    double variance = 0.0;
    double energy = 0.0;
    int inner_iters = 0;
    double inner_step_norm = 0.0;
    std::vector<cone::Status> statuses;
};

struct DinkelbachTrace {
    std::vector<OuterRecord> records;
};

/// Raised when max_outer is exhausted; carries everything computed so far.
class DinkelbachNotConverged : public ConvergenceError {
public:
    DinkelbachNotConverged(const std::string& what, DinkelbachTrace trace, Eigen::VectorXd c)
        : ConvergenceError(what), trace_(std::move(trace)), c_(std::move(c)) {}

    [[nodiscard]] const DinkelbachTrace& trace() const noexcept { return trace_; }
    [[nodiscard]] const Eigen::VectorXd& last_coefficients() const noexcept { return c_; }

private:
    DinkelbachTrace trace_;
    Eigen::VectorXd c_;
};

struct InitialPoint {
    Eigen::VectorXd c;
    double xi = 0.0;
};

/// c1 = min(V_max, L/T) sqrt(T/2), other modes zero; xi from the spectral forms.
InitialPoint initialize(const ProblemConfig& cfg, const SpectralBasis& basis);

/// Everything the inner loop needs that does not change with xi.
struct ConstraintMaps {
    ChebyshevMap map;
    SosConstraintSet lower;
    SosConstraintSet upper;
};

ConstraintMaps build_constraint_maps(const ProblemConfig& cfg, const SpectralBasis& basis);

struct InnerResult {
    Eigen::VectorXd c;
    int iterations = 0;
    double step_norm = 0.0;
    std::vector<cone::Status> statuses;
};

/// Repeats the convex surrogate solve until ||c^k - c^{k-1}|| <= eps_in or
/// max_inner solves. Throws InfeasibleError or ConvergenceError when a subproblem
/// does not end optimal.
InnerResult sca_inner(const Eigen::VectorXd& c_start, double xi, const ProblemConfig& cfg,
                      const std::shared_ptr<const SpectralBasis>& basis,
                      const ConstraintMaps& maps);

struct OptimizationResult {
    SpectralProfile profile;
    DinkelbachTrace trace;
    double variance = 0.0; ///< quadrature, final profile
    double energy = 0.0;
    double ee = 0.0;       ///< equals the last xi
};

OptimizationResult optimize(const ProblemConfig& cfg);

/// Variance and energy of a spectral profile by quadrature on cfg.grid_points nodes.
ProfileMetrics measure_spectral(const SpectralProfile& p, const ProblemConfig& cfg);

} // namespace mavel
