#include "mavel/spectral.hpp"

#include "mavel/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mavel {

namespace {

constexpr double pi = std::numbers::pi;

// (1 - (-1)^d) / d, with the removable d = 0 case set to 0 (d even => numerator 0).
double odd_reciprocal(int d) {
    if (d % 2 == 0) {
        return 0.0;
    }
    return 2.0 / d;
}

void require_size(const Eigen::VectorXd& c, const SpectralBasis& basis, const char* where) {
    if (c.size() != basis.size()) {
        throw InvalidArgument(std::string(where) + ": coefficient vector has " +
                              std::to_string(c.size()) + " entries, basis has " +
                              std::to_string(basis.size()));
    }
}

} // namespace

SpectralBasis::SpectralBasis(int N, double T)
    : N_(N), T_(T), lambda_(N), beta_(N),
      tensor_(static_cast<std::size_t>(N) * N * N) {
    if (N < 1 || !(T > 0.0)) {
        throw InvalidArgument("spectral basis requires N >= 1 and T > 0");
    }
    for (int n = 1; n <= N; ++n) {
        lambda_(n - 1) = T / ((n * pi) * (n * pi));
        beta_(n - 1) = std::sqrt(2.0 * T) * odd_reciprocal(n) / pi;
    }
    for (int n = 1; n <= N; ++n) {
        for (int m = 1; m <= N; ++m) {
            for (int k = 1; k <= N; ++k) {
                tensor_[index(n - 1, m - 1, k - 1)] = triple_product(n, m, k, T);
            }
        }
    }
}

double SpectralBasis::triple_product(int n, int m, int k, double T) {
    const double sum = odd_reciprocal(n - m + k) + odd_reciprocal(m - n + k) +
                       odd_reciprocal(n + m - k) - odd_reciprocal(n + m + k);
    return sum / (pi * std::sqrt(2.0 * T));
}

Eigen::MatrixXd SpectralBasis::slice(int k) const {
    Eigen::MatrixXd S(N_, N_);
    for (int n = 0; n < N_; ++n) {
        for (int m = 0; m < N_; ++m) {
            S(n, m) = tensor_[index(n, m, k)];
        }
    }
    return S;
}

double SpectralBasis::mode(int n, double t) const {
    return std::sqrt(2.0 / T_) * std::sin(n * pi * t / T_);
}

std::shared_ptr<const SpectralBasis> build_basis(int N, double T) {
    return std::make_shared<const SpectralBasis>(N, T);
}

double SpectralProfile::operator()(double t) const {
    const double T = basis->duration();
    if (t <= 0.0 || t >= T) {
        return 0.0;
    }
    double v = 0.0;
    for (int n = 1; n <= basis->size(); ++n) {
        v += c(n - 1) * basis->mode(n, t);
    }
    return v;
}

SampledProfile evaluate_profile(const SpectralProfile& p, std::span<const double> grid) {
    require_size(p.c, *p.basis, "evaluate_profile");
    const double T = p.basis->duration();
    SampledProfile out{std::vector<double>(grid.begin(), grid.end()),
                       std::vector<double>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || grid[i] > T * (1.0 + 1e-12)) {
            throw InvalidArgument("evaluate_profile: grid point outside [0, T]");
        }
        out.v[i] = p(grid[i]);
    }
    return out;
}

double spectral_variance(const SpectralProfile& p) {
    require_size(p.c, *p.basis, "spectral_variance");
    return p.c.dot(p.basis->eigenvalues().cwiseProduct(p.c));
}

double cubic_moment(const Eigen::VectorXd& c, const SpectralBasis& basis) {
    return c.dot(drag_coupling(c, basis));
}

double spectral_energy(const SpectralProfile& p, const ProblemConfig& cfg) {
    require_size(p.c, *p.basis, "spectral_energy");
    return cfg.alpha1 * p.c.squaredNorm() + cfg.alpha2 * cubic_moment(p.c, *p.basis);
}

ResidualContext make_residual_context(std::shared_ptr<const SpectralBasis> basis, double xi,
                                      double alpha1, double alpha2) {
    ResidualContext ctx;
    ctx.xi = xi;
    ctx.alpha2 = alpha2;
    ctx.A = 2.0 * (basis->eigenvalues().array() - xi * alpha1).matrix();
    ctx.basis = std::move(basis);
    return ctx;
}

Eigen::VectorXd drag_coupling(const Eigen::VectorXd& c, const SpectralBasis& basis) {
    require_size(c, basis, "drag_coupling");
    const int N = basis.size();
    Eigen::VectorXd q = Eigen::VectorXd::Zero(N);
    for (int k = 1; k <= N; ++k) {
        double acc = 0.0;
        for (int n = 1; n <= N; ++n) {
            double row = 0.0;
            for (int m = 1; m <= N; ++m) {
                row += basis.tensor(n, m, k) * c(m - 1);
            }
            acc += c(n - 1) * row;
        }
        q(k - 1) = acc;
    }
    return q;
}

Eigen::VectorXd residual(const Eigen::VectorXd& c, const ResidualContext& ctx) {
    require_size(c, *ctx.basis, "residual");
    return ctx.A.cwiseProduct(c) - 3.0 * ctx.xi * ctx.alpha2 * drag_coupling(c, *ctx.basis);
}

Eigen::MatrixXd jacobian(const Eigen::VectorXd& c, const ResidualContext& ctx) {
    require_size(c, *ctx.basis, "jacobian");
    const auto& basis = *ctx.basis;
    const int N = basis.size();
    Eigen::MatrixXd J = ctx.A.asDiagonal();
    const double scale = 6.0 * ctx.xi * ctx.alpha2;
    for (int k = 1; k <= N; ++k) {
        for (int j = 1; j <= N; ++j) {
            double coupling = 0.0;
            for (int n = 1; n <= N; ++n) {
                coupling += c(n - 1) * basis.tensor(n, j, k);
            }
            J(k - 1, j - 1) -= scale * coupling;
        }
    }
    return J;
}

} // namespace mavel
