#include "mavel/validation.hpp"

#include "mavel/baselines.hpp"
#include "mavel/functionals.hpp"
#include "mavel/parallel.hpp"
#include "mavel/sos.hpp"
#include "mavel/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace mavel {

namespace {

constexpr double pi = std::numbers::pi;

struct GaussRule {
    std::vector<double> x, w;
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
GaussRule gauss_legendre(int n) {
    GaussRule r{std::vector<double>(n), std::vector<double>(n)};
    for (int i = 0; i < n; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

template <typename Fn>
double composite_gauss(Fn&& f, double a, double b, int panels, const GaussRule& rule) {
    const double h = (b - a) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            acc += rule.w[i] * f(mid + 0.5 * h * rule.x[i]);
        }
    }
    return 0.5 * h * acc;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

ValidationCheck check_kernel_variance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> order(1, 15);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const std::vector<double> grid = uniform_grid(1.0, 4001);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const int N = order(rng);
        const auto basis = build_basis(N, 1.0);
        Eigen::VectorXd c(N);
        for (int n = 0; n < N; ++n) {
            c(n) = coef(rng);
        }
        const SampledProfile v = evaluate_profile({c, basis}, grid);
        const double direct = variance_direct(integrate_trajectory(v));
        const double kernel = variance_via_kernel(v);
        worst = std::max(worst, std::abs(direct - kernel) / std::max(direct, 1e-12));
    }
    return {"kernel-vs-direct-variance", worst <= 1e-6,
            "max relative gap " + fmt(worst) + " over 200 profiles (tol 1e-6)"};
}

ValidationCheck check_tensor() {
    const GaussRule rule = gauss_legendre(10);
    const SpectralBasis basis(12, 1.0);
    double worst = 0.0;
    for (int n = 1; n <= 12; ++n) {
        for (int m = n; m <= 12; ++m) {
            for (int k = m; k <= 12; ++k) {
                const double q = composite_gauss(
                    [&](double t) { return basis.mode(n, t) * basis.mode(m, t) * basis.mode(k, t); },
                    0.0, 1.0, 64, rule);
                worst = std::max(worst, std::abs(q - basis.tensor(n, m, k)));
            }
        }
    }
    return {"tensor-closed-form", worst <= 1e-10,
            "max abs deviation " + fmt(worst) + " for n,m,k <= 12 (tol 1e-10)"};
}

ValidationCheck check_jacobian(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_real_distribution<double> xi_draw(0.05, 0.5);
    const auto basis = build_basis(11, 1.0);
    const double h = 1e-6;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::VectorXd c(11);
        for (int n = 0; n < 11; ++n) {
            c(n) = coef(rng);
        }
        const auto ctx = make_residual_context(basis, xi_draw(rng), 0.2, 0.1);
        const Eigen::MatrixXd J = jacobian(c, ctx);
        Eigen::MatrixXd fd(11, 11);
        for (int j = 0; j < 11; ++j) {
            Eigen::VectorXd up = c, dn = c;
            up(j) += h;
            dn(j) -= h;
            fd.col(j) = (residual(up, ctx) - residual(dn, ctx)) / (2.0 * h);
        }
        worst = std::max(worst, (J - fd).cwiseAbs().maxCoeff() / J.cwiseAbs().maxCoeff());
    }
    return {"jacobian-finite-difference", worst <= 1e-6,
            "max relative error " + fmt(worst) + " over 50 draws (tol 1e-6)"};
}

ValidationCheck check_mercer() {
    const double T = 1.0;
    const SpectralBasis basis(200, T);
    const std::vector<double> grid = uniform_grid(T, 101);
    Eigen::MatrixXd phi(101, 200);
    for (int i = 0; i < 101; ++i) {
        for (int n = 1; n <= 200; ++n) {
            phi(i, n - 1) = basis.mode(n, grid[i]);
        }
    }
    const Eigen::MatrixXd recon = phi * basis.eigenvalues().asDiagonal() * phi.transpose();
    double worst = 0.0;
    for (int i = 0; i < 101; ++i) {
        for (int j = 0; j < 101; ++j) {
            worst = std::max(worst, std::abs(bridge_kernel(grid[i], grid[j], T) - recon(i, j)));
        }
    }
    return {"mercer-reconstruction", worst <= 1e-3 * T,
            "sup error " + fmt(worst) + " with 200 modes on 101x101 (tol 1e-3 T)"};
}

ValidationCheck check_sos_soundness(std::mt19937_64& rng, int jobs) {
    const ProblemConfig cfg;
    const auto basis = build_basis(cfg.N, cfg.T);
    std::uniform_real_distribution<double> lead(0.5, 6.0);
    std::uniform_real_distribution<double> rest(-0.4, 0.4);
    const int draws = 24;
    std::vector<Eigen::VectorXd> cs;
    for (int d = 0; d < draws; ++d) {
        Eigen::VectorXd c(cfg.N);
        c(0) = lead(rng);
        for (int n = 1; n < cfg.N; ++n) {
            c(n) = rest(rng) / (n + 1);
        }
        cs.push_back(std::move(c));
    }
    std::vector<int> certified(draws, 0), sound(draws, 1);
    const std::vector<double> grid = uniform_grid(cfg.T, 4001);
    parallel_for(cs.size(), jobs, [&](std::size_t d) {
        const CertifyResult r = certify_profile(cs[d], *basis, cfg);
        if (r.status != CertifyResult::Status::certified) {
            return;
        }
        certified[d] = 1;
        const SpectralProfile p{cs[d], basis};
        for (double t : grid) {
            const double v = p(t);
            if (v < -1e-7 || v > cfg.V_max * (1.0 + 1e-7)) {
                sound[d] = 0;
            }
        }
        if (r.certificate->coefficient_residual > 1e-8 || r.certificate->min_eigenvalue < -1e-8) {
            sound[d] = 0;
        }
    });
    int n_cert = 0, n_bad = 0;
    for (int d = 0; d < draws; ++d) {
        n_cert += certified[d];
        n_bad += certified[d] && !sound[d];
    }
    return {"sos-certificate-soundness", n_cert > 0 && n_bad == 0,
            std::to_string(n_cert) + " of " + std::to_string(draws) + " draws certified, " +
                std::to_string(n_bad) + " violate sampled bounds or certificate tolerances"};
}

ValidationCheck check_value(const std::string& name, double got, double want, double tol) {
    return {name, std::abs(got - want) <= tol,
            "got " + fmt(got) + ", expected " + fmt(want) + " +- " + fmt(tol)};
}

} // namespace

std::vector<ValidationCheck> run_validation(const ProblemConfig& cfg, int jobs) {
    std::mt19937_64 rng(cfg.seed);
    std::vector<ValidationCheck> out;
    out.push_back(check_kernel_variance(rng));
    out.push_back(check_tensor());
    out.push_back(check_jacobian(rng));
    out.push_back(check_mercer());
    out.push_back(check_sos_soundness(rng, jobs));

    ProblemConfig ref;
    out.push_back(check_value("sinusoidal-ee", measure(sinusoidal_profile(ref), ref).ee, 0.1382, 1e-3));
    out.push_back(check_value("binary-ee", measure(binary_profile(ref), ref).ee, 0.0611, 1e-3));
    out.push_back(check_value("trapezoidal-ee", trapezoidal_profile(ref).ee, 0.15, 0.01));
    out.push_back(check_value("uniform-ee", measure(uniform_profile(ref), ref).ee, 0.1282, 1e-4));
    ref.include_terminal_kinetic = false;
    out.push_back(check_value("uniform-ee-no-terminal-ke", measure(uniform_profile(ref), ref).ee,
                              0.1389, 1e-4));
    return out;
}

MonteCarloReport run_crb_check(const ProblemConfig& cfg, int trials, double snr_db, int jobs) {
    const std::vector<double> positions = snapshot_positions(sinusoidal_profile(cfg), cfg.snapshots);
    return monte_carlo_crb(positions, sensing_model(cfg), cfg.T, snr_db, trials, cfg.theta_grid,
                           cfg.seed, jobs);
}

} // namespace mavel
