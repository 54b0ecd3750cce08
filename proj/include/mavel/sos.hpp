#pragma once

#include "mavel/config.hpp"
#include "mavel/spectral.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace mavel {

// =============================================================================
// Chebyshev-U representation of v_N
// =============================================================================
//
// With x = cos(pi t / T), v_N(t) = sqrt(2/T) sqrt(1 - x^2) P(x), where P is the
// polynomial sum_n c_n U_{n-1}(x). 0 <= v <= V_max is then a pair of
// nonnegativity conditions on [-1, 1]: P >= 0 and
// G(x) = sqrt(T/2) V_max - (1 - x^2/2) P(x) >= 0 (a sufficient condition, since
// sqrt(1 - x^2) <= 1 - x^2/2).

/// Monomial coefficients p_0..p_D on x in [-1, 1].
using PolyCoeffs = Eigen::VectorXd;

struct ChebyshevMap {
    Eigen::MatrixXd M; ///< N x N, p = M c
    Eigen::MatrixXd F; ///< (N+2) x N, g = F p + b
    Eigen::VectorXd b; ///< (sqrt(T/2) V_max, 0, ..., 0)
};

ChebyshevMap build_chebyshev_map(int N, double T, double V_max);

/// Coefficient of x^k in z(x)' Q z(x), z = (1, x, ..., x^{d-1}). Zero for k < 0.
double gram_coefficient(const Eigen::MatrixXd& Q, int k);

// =============================================================================
// Markov-Lukacs constraint sets
// =============================================================================

/// Which representation certifies p >= 0 on [-1, 1]:
/// even degree  p = s1 + (1 - x^2) s2,  odd degree  p = (1 + x) s1 + (1 - x) s2.
enum class LukacsBranch { even_degree, odd_degree };

const char* to_string(LukacsBranch b);

/**
 * @brief Linear equalities tying polynomial coefficients to Gram blocks.
 *
 * Row k of the system reads
 *   sum_b gram_maps[b].row(k) * svec(Q_b) = coeff_map.row(k) * c + coeff_offset(k)
 * for k = 0..degree, where svec is the sqrt(2)-scaled lower-triangle vector used by
 * the cone solver.
 */
struct SosConstraintSet {
    int degree = 0;
    LukacsBranch branch = LukacsBranch::even_degree;
    std::vector<int> block_sizes;
    std::vector<Eigen::MatrixXd> gram_maps;
    Eigen::MatrixXd coeff_map;
    Eigen::VectorXd coeff_offset;
};

/// Generic constraint set for a degree-D polynomial p = coeff_map c + coeff_offset.
SosConstraintSet make_sos_constraints(int degree, Eigen::MatrixXd coeff_map,
                                      Eigen::VectorXd coeff_offset);

/// P = M c >= 0 (degree N - 1).
SosConstraintSet assemble_lower_constraints(int N, const ChebyshevMap& map);

/// G = F M c + b >= 0 (degree N + 1).
SosConstraintSet assemble_upper_constraints(int N, const ChebyshevMap& map);

/// Polynomial coefficients implied by a set of Gram blocks.
PolyCoeffs reconstruct_polynomial(const SosConstraintSet& set,
                                  const std::vector<Eigen::MatrixXd>& grams);

// =============================================================================
// Certificates
// =============================================================================

struct SosCertificate {
    std::vector<Eigen::MatrixXd> lower; ///< Q1, Q2 (Q2 may be 0 x 0)
    std::vector<Eigen::MatrixXd> upper; ///< Y1, Y2
    LukacsBranch lower_branch = LukacsBranch::even_degree;
    LukacsBranch upper_branch = LukacsBranch::even_degree;
    double min_eigenvalue = 0.0;
    double coefficient_residual = 0.0; ///< max |reconstructed - (Mc, FMc + b)|
};

struct CertifyResult {
    enum class Status { certified, infeasible, solver_failure };

    Status status = Status::solver_failure;
    std::optional<SosCertificate> certificate;
    double worst_time = 0.0;      ///< sampled time with the smallest bound margin
    double worst_violation = 0.0; ///< max(-v, v - V_max) there; <= 0 when sampling sees no violation
    std::string message;
};

/// Checks 0 <= v_N <= V_max through the SOS system at fixed c.
CertifyResult certify_profile(const Eigen::VectorXd& c, const SpectralBasis& basis,
                              const ProblemConfig& cfg);

/// Conservative norm-ball inner approximations of |v| <= V_max.
struct NormBallFlags {
    bool l1 = false;
    bool l2 = false;
};

NormBallFlags norm_ball_memberships(const Eigen::VectorXd& c, const ProblemConfig& cfg);

// =============================================================================
// Two-coefficient feasible region
// =============================================================================

struct RegionGrid {
    double c1_min = -1.0;
    double c1_max = 1.0;
    double c2_min = -1.0;
    double c2_max = 1.0;
    int points = 201; ///< per axis
};

struct RegionPoint {
    double c1 = 0.0;
    double c2 = 0.0;
    bool sos = false;   ///< G >= 0 certified for both +v and -v
    bool l1 = false;
    bool l2 = false;
    bool truth = false; ///< max |v| <= V_max over 2001 samples
};

/// Membership of each grid point under |v| <= V_max; requires cfg.N == 2.
std::vector<RegionPoint> rasterize_feasible_region(const RegionGrid& grid,
                                                   const ProblemConfig& cfg, int jobs = 1);

} // namespace mavel
