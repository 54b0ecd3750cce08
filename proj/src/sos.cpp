#include "mavel/sos.hpp"

#include "mavel/conic.hpp"
#include "mavel/errors.hpp"
#include "mavel/parallel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mavel {

namespace {

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

// Sign applied to each Gram block's contribution at monomial shift 0 and 1 (odd)
// or 0 and 2 (even).
struct BlockRule {
    int order;
    double at0;
    int shift;
    double at_shift;
};

std::vector<BlockRule> lukacs_rules(int degree) {
    if (degree % 2 == 0) {
        std::vector<BlockRule> rules{{degree / 2 + 1, 1.0, 2, 0.0}};
        if (degree >= 2) {
            rules.push_back({degree / 2, 1.0, 2, -1.0});
        }
        return rules;
    }
    const int order = (degree - 1) / 2 + 1;
    return {{order, 1.0, 1, 1.0}, {order, 1.0, 1, -1.0}};
}

std::string format_time(double t) {
    std::ostringstream os;
    os.precision(6);
    os << t;
    return os.str();
}

} // namespace

const char* to_string(LukacsBranch b) {
    return b == LukacsBranch::even_degree ? "even-degree" : "odd-degree";
}

ChebyshevMap build_chebyshev_map(int N, double T, double V_max) {
    if (N < 1 || !(T > 0.0)) {
        throw InvalidArgument("build_chebyshev_map requires N >= 1 and T > 0");
    }
    ChebyshevMap map;
    map.M = Eigen::MatrixXd::Zero(N, N);
    for (int n = 1; n <= N; ++n) {
        for (int k = 0; k <= n - 1; ++k) {
            if ((n - 1 - k) % 2 != 0) {
                continue;
            }
            const int j = (n - 1 - k) / 2;
            const double sign = (j % 2 == 0) ? 1.0 : -1.0;
            map.M(k, n - 1) = sign * binomial((n - 1 + k) / 2, j) * std::ldexp(1.0, k);
        }
    }
    map.F = Eigen::MatrixXd::Zero(N + 2, N);
    map.F.bottomRows(N) += 0.5 * Eigen::MatrixXd::Identity(N, N);
    map.F.topRows(N) -= Eigen::MatrixXd::Identity(N, N);
    map.b = Eigen::VectorXd::Zero(N + 2);
    map.b(0) = std::sqrt(T / 2.0) * V_max;
    return map;
}

double gram_coefficient(const Eigen::MatrixXd& Q, int k) {
    if (k < 0) {
        return 0.0;
    }
    const int d = static_cast<int>(Q.rows());
    if (Q.cols() != d || k > 2 * (d - 1)) {
        throw InvalidArgument("gram_coefficient: monomial degree " + std::to_string(k) +
                              " out of range for a " + std::to_string(d) + "x" +
                              std::to_string(Q.cols()) + " Gram matrix");
    }
    double sum = 0.0;
    for (int i = std::max(0, k - d + 1); i <= std::min(k, d - 1); ++i) {
        sum += Q(i, k - i);
    }
    return sum;
}

SosConstraintSet make_sos_constraints(int degree, Eigen::MatrixXd coeff_map,
                                      Eigen::VectorXd coeff_offset) {
    if (degree < 0 || coeff_map.rows() != degree + 1 || coeff_offset.size() != degree + 1) {
        throw InvalidArgument("make_sos_constraints: coefficient data does not match degree");
    }
    SosConstraintSet set;
    set.degree = degree;
    set.branch = degree % 2 == 0 ? LukacsBranch::even_degree : LukacsBranch::odd_degree;
    set.coeff_map = std::move(coeff_map);
    set.coeff_offset = std::move(coeff_offset);
    for (const BlockRule& rule : lukacs_rules(degree)) {
        const int d = rule.order;
        Eigen::MatrixXd G = Eigen::MatrixXd::Zero(degree + 1, cone::svec_size(d));
        int idx = 0;
        for (int j = 0; j < d; ++j) {
            for (int i = j; i < d; ++i, ++idx) {
                const double w = (i == j) ? 1.0 : std::numbers::sqrt2;
                G(i + j, idx) += rule.at0 * w;
                if (rule.at_shift != 0.0) {
                    G(i + j + rule.shift, idx) += rule.at_shift * w;
                }
            }
        }
        set.block_sizes.push_back(d);
        set.gram_maps.push_back(std::move(G));
    }
    return set;
}

SosConstraintSet assemble_lower_constraints(int N, const ChebyshevMap& map) {
    if (map.M.rows() != N) {
        throw InvalidArgument("assemble_lower_constraints: map built for a different N");
    }
    return make_sos_constraints(N - 1, map.M, Eigen::VectorXd::Zero(N));
}

SosConstraintSet assemble_upper_constraints(int N, const ChebyshevMap& map) {
    if (map.M.rows() != N) {
        throw InvalidArgument("assemble_upper_constraints: map built for a different N");
    }
    return make_sos_constraints(N + 1, map.F * map.M, map.b);
}

PolyCoeffs reconstruct_polynomial(const SosConstraintSet& set,
                                  const std::vector<Eigen::MatrixXd>& grams) {
    if (grams.size() != set.block_sizes.size()) {
        throw InvalidArgument("reconstruct_polynomial: wrong number of Gram blocks");
    }
    PolyCoeffs p = PolyCoeffs::Zero(set.degree + 1);
    for (std::size_t b = 0; b < grams.size(); ++b) {
        p += set.gram_maps[b] * cone::svec(grams[b]);
    }
    return p;
}

CertifyResult certify_profile(const Eigen::VectorXd& c, const SpectralBasis& basis,
                              const ProblemConfig& cfg) {
    const int N = basis.size();
    if (c.size() != N) {
        throw InvalidArgument("certify_profile: coefficient count does not match the basis");
    }
    const ChebyshevMap map = build_chebyshev_map(N, basis.duration(), cfg.V_max);

    ConicSubproblem sub;
    sub.coefficients = N;
    sub.sos = {assemble_lower_constraints(N, map), assemble_upper_constraints(N, map)};
    sub.fixed_c = c;
    const SolveResult res = solve(sub, solver_settings(cfg));

    CertifyResult out;
    const std::vector<double> grid = uniform_grid(basis.duration(), cfg.grid_points);
    const SpectralProfile profile{c, std::shared_ptr<const SpectralBasis>(&basis, [](auto*) {})};
    double worst_margin = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        const double v = profile(t);
        const double margin = std::min(v, cfg.V_max - v);
        if (margin < worst_margin) {
            worst_margin = margin;
            out.worst_time = t;
        }
    }
    out.worst_violation = -worst_margin;

    switch (res.status) {
    case cone::Status::optimal: {
        SosCertificate cert;
        cert.lower = res.grams[0];
        cert.upper = res.grams[1];
        cert.lower_branch = sub.sos[0].branch;
        cert.upper_branch = sub.sos[1].branch;
        cert.min_eigenvalue = res.min_eigenvalue;
        for (int s = 0; s < 2; ++s) {
            const auto& set = sub.sos[s];
            const PolyCoeffs want = set.coeff_map * c + set.coeff_offset;
            const PolyCoeffs got = reconstruct_polynomial(set, res.grams[s]);
            cert.coefficient_residual =
                std::max(cert.coefficient_residual, (want - got).cwiseAbs().maxCoeff());
        }
        out.status = CertifyResult::Status::certified;
        out.certificate = std::move(cert);
        out.message = "certified";
        break;
    }
    case cone::Status::infeasible:
        out.status = CertifyResult::Status::infeasible;
        out.message = "no SOS certificate for 0 <= v <= V_max; tightest sampled time t=" +
                      format_time(out.worst_time);
        break;
    default:
        out.status = CertifyResult::Status::solver_failure;
        out.message = std::string("feasibility solve ended with status ") + cone::to_string(res.status);
        break;
    }
    return out;
}

NormBallFlags norm_ball_memberships(const Eigen::VectorXd& c, const ProblemConfig& cfg) {
    const double n = static_cast<double>(std::max<Eigen::Index>(c.size(), 1));
    NormBallFlags flags;
    flags.l1 = c.lpNorm<1>() <= std::sqrt(cfg.T / 2.0) * cfg.V_max;
    flags.l2 = c.norm() <= std::sqrt(cfg.T / (2.0 * n)) * cfg.V_max;
    return flags;
}

std::vector<RegionPoint> rasterize_feasible_region(const RegionGrid& grid,
                                                   const ProblemConfig& cfg, int jobs) {
    if (cfg.N != 2) {
        throw InvalidArgument("rasterize_feasible_region supports N = 2 only");
    }
    if (grid.points < 2 || !(grid.c1_max > grid.c1_min) || !(grid.c2_max > grid.c2_min)) {
        throw InvalidArgument("rasterize_feasible_region: degenerate grid");
    }
    const auto basis = build_basis(2, cfg.T);
    const ChebyshevMap map = build_chebyshev_map(2, cfg.T, cfg.V_max);
    const Eigen::MatrixXd FM = map.F * map.M;
    // |v| <= V_max as G >= 0 for both +v and -v.
    const SosConstraintSet plus = make_sos_constraints(3, FM, map.b);
    const SosConstraintSet minus = make_sos_constraints(3, -FM, map.b);
    const cone::Settings settings = solver_settings(cfg);
    const std::vector<double> samples = uniform_grid(cfg.T, 2001);

    const int P = grid.points;
    std::vector<RegionPoint> out(static_cast<std::size_t>(P) * P);
    parallel_for(out.size(), jobs, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / P;
        const int j = static_cast<int>(idx) % P;
        RegionPoint& pt = out[idx];
        pt.c1 = grid.c1_min + i * (grid.c1_max - grid.c1_min) / (P - 1);
        pt.c2 = grid.c2_min + j * (grid.c2_max - grid.c2_min) / (P - 1);
        const Eigen::Vector2d c(pt.c1, pt.c2);

        bool sos = true;
        for (const SosConstraintSet* set : {&plus, &minus}) {
            ConicSubproblem sub;
            sub.coefficients = 2;
            sub.sos = {*set};
            sub.fixed_c = Eigen::VectorXd(c);
            if (solve(sub, settings).status != cone::Status::optimal) {
                sos = false;
                break;
            }
        }
        pt.sos = sos;

        const NormBallFlags flags = norm_ball_memberships(c, cfg);
        pt.l1 = flags.l1;
        pt.l2 = flags.l2;

        const SpectralProfile profile{c, basis};
        double peak = 0.0;
        for (double t : samples) {
            peak = std::max(peak, std::abs(profile(t)));
        }
        pt.truth = peak <= cfg.V_max;
    });
    return out;
}

} // namespace mavel
