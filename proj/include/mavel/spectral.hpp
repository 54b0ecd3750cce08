#pragma once

#include "mavel/config.hpp"
#include "mavel/functionals.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <vector>

namespace mavel {

// =============================================================================
// Sinusoidal Mercer basis of the Brownian-bridge kernel
// =============================================================================

/**
 * @brief Eigensystem of the variance kernel truncated to N modes on [0, T].
 *
 * phi_n(t) = sqrt(2/T) sin(n pi t / T) with eigenvalue T / (n pi)^2. The triple
 * product tensor tensor(n,m,k) = \int phi_n phi_m phi_k carries the cubic drag
 * energy; beta_n = \int phi_n is the distance functional. Indices are 1-based in
 * the accessor to match mode numbers.
 */
class SpectralBasis {
public:
    SpectralBasis(int N, double T);

    [[nodiscard]] int size() const noexcept { return N_; }
    [[nodiscard]] double duration() const noexcept { return T_; }

    [[nodiscard]] const Eigen::VectorXd& eigenvalues() const noexcept { return lambda_; }
    [[nodiscard]] const Eigen::VectorXd& distance_weights() const noexcept { return beta_; }

    /// Triple-product value for modes n, m, k in 1..N.
    [[nodiscard]] double tensor(int n, int m, int k) const {
        return tensor_[index(n - 1, m - 1, k - 1)];
    }

    /// Frontal slice T_k (0-based k) as a dense N x N matrix.
    [[nodiscard]] Eigen::MatrixXd slice(int k) const;

    /// phi_n(t) for mode n >= 1.
    [[nodiscard]] double mode(int n, double t) const;

    /// Closed-form triple product for arbitrary n, m, k >= 1.
    [[nodiscard]] static double triple_product(int n, int m, int k, double T);

private:
    [[nodiscard]] std::size_t index(int n, int m, int k) const {
        return (static_cast<std::size_t>(n) * N_ + m) * N_ + k;
    }

    int N_;
    double T_;
    Eigen::VectorXd lambda_;
    Eigen::VectorXd beta_;
    std::vector<double> tensor_;
};

std::shared_ptr<const SpectralBasis> build_basis(int N, double T);

/// Velocity v_N(t) = sum_n c_n phi_n(t); coefficients carry units of m/s * sqrt(s).
struct SpectralProfile {
    Eigen::VectorXd c;
    std::shared_ptr<const SpectralBasis> basis;

    [[nodiscard]] double operator()(double t) const;
};

SampledProfile evaluate_profile(const SpectralProfile& p, std::span<const double> grid);

/// c^T Lambda c.
double spectral_variance(const SpectralProfile& p);

/// alpha1 ||c||^2 + alpha2 sum c_n c_m c_k T_nmk (no terminal term: v_N(T) = 0).
double spectral_energy(const SpectralProfile& p, const ProblemConfig& cfg);

/// sum_{n,m,k} c_n c_m c_k T_nmk = \int v_N^3.
double cubic_moment(const Eigen::VectorXd& c, const SpectralBasis& basis);

// =============================================================================
// Galerkin residual of the Euler-Lagrange equation
// =============================================================================

/// Data that fixes f(c) = A c - 3 xi alpha2 q(c) for one Dinkelbach parameter.
struct ResidualContext {
    double xi = 0.0;
    double alpha2 = 0.0;
    Eigen::VectorXd A; ///< diagonal of 2 (Lambda - xi alpha1 I)
    std::shared_ptr<const SpectralBasis> basis;
};

ResidualContext make_residual_context(std::shared_ptr<const SpectralBasis> basis, double xi,
                                      double alpha1, double alpha2);

/// q_k(c) = c^T T_k c.
Eigen::VectorXd drag_coupling(const Eigen::VectorXd& c, const SpectralBasis& basis);

Eigen::VectorXd residual(const Eigen::VectorXd& c, const ResidualContext& ctx);

/// J(c) = diag(A) - 6 xi alpha2 K(c), K_kj = sum_n c_n T_njk.
Eigen::MatrixXd jacobian(const Eigen::VectorXd& c, const ResidualContext& ctx);

} // namespace mavel
