#include "mavel/conic.hpp"

#include "mavel/errors.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace mavel {

namespace {

constexpr double verify_tol = 1e-8;

struct Layout {
    int n_c = 0;
    std::vector<std::vector<int>> offsets; // variable offset of each block, per set
    int variables = 0;
};

Layout layout_of(const ConicSubproblem& sub) {
    Layout lay;
    lay.n_c = sub.coefficients;
    int off = lay.n_c;
    for (const auto& set : sub.sos) {
        std::vector<int> offs;
        for (int d : set.block_sizes) {
            offs.push_back(off);
            off += cone::svec_size(d);
        }
        lay.offsets.push_back(std::move(offs));
    }
    lay.variables = off;
    return lay;
}

cone::ConeProgram build_program(const ConicSubproblem& sub, const Layout& lay) {
    const int n = lay.variables;
    int eq_rows = sub.fixed_c ? lay.n_c : 0;
    for (const auto& set : sub.sos) {
        eq_rows += set.degree + 1;
    }
    int psd_rows = 0;
    cone::ConeProgram prog;
    prog.cones.nonneg = static_cast<int>(sub.inequalities.size());
    for (const auto& set : sub.sos) {
        for (int d : set.block_sizes) {
            prog.cones.psd.push_back(d);
            psd_rows += cone::svec_size(d);
        }
    }

    prog.A = Eigen::MatrixXd::Zero(eq_rows, n);
    prog.b = Eigen::VectorXd::Zero(eq_rows);
    int row = 0;
    for (std::size_t s = 0; s < sub.sos.size(); ++s) {
        const auto& set = sub.sos[s];
        const int rows = set.degree + 1;
        prog.A.block(row, 0, rows, lay.n_c) = -set.coeff_map;
        for (std::size_t b = 0; b < set.block_sizes.size(); ++b) {
            prog.A.block(row, lay.offsets[s][b], rows, set.gram_maps[b].cols()) = set.gram_maps[b];
        }
        prog.b.segment(row, rows) = set.coeff_offset;
        row += rows;
    }
    if (sub.fixed_c) {
        prog.A.block(row, 0, lay.n_c, lay.n_c).setIdentity();
        prog.b.segment(row, lay.n_c) = *sub.fixed_c;
    }

    const int l = prog.cones.nonneg;
    prog.G = Eigen::MatrixXd::Zero(l + psd_rows, n);
    prog.h = Eigen::VectorXd::Zero(l + psd_rows);
    for (int i = 0; i < l; ++i) {
        prog.G.block(i, 0, 1, lay.n_c) = sub.inequalities[i].a.transpose();
        prog.h(i) = sub.inequalities[i].bound;
    }
    prog.G.block(l, lay.n_c, psd_rows, psd_rows) = -Eigen::MatrixXd::Identity(psd_rows, psd_rows);

    prog.q = Eigen::VectorXd::Zero(n);
    if (sub.jacobian.size() > 0) {
        const Eigen::MatrixXd& J = sub.jacobian;
        prog.P = Eigen::MatrixXd::Zero(n, n);
        prog.P.topLeftCorner(lay.n_c, lay.n_c) = J.transpose() * J;
        prog.q.head(lay.n_c) = J.transpose() * (sub.residual - J * sub.point);
    }
    return prog;
}

void check_subproblem(const ConicSubproblem& sub) {
    const int n = sub.coefficients;
    if (n < 1) {
        throw InvalidArgument("conic subproblem: no coefficients");
    }
    if (sub.jacobian.size() > 0 &&
        (sub.jacobian.rows() != sub.residual.size() || sub.jacobian.cols() != n ||
         sub.point.size() != n)) {
        throw InvalidArgument("conic subproblem: objective data has inconsistent dimensions");
    }
    for (const auto& set : sub.sos) {
        if (set.coeff_map.cols() != n || set.coeff_map.rows() != set.degree + 1 ||
            set.coeff_offset.size() != set.degree + 1 ||
            set.gram_maps.size() != set.block_sizes.size()) {
            throw InvalidArgument("conic subproblem: SOS set does not match the coefficient count");
        }
    }
    for (const auto& ineq : sub.inequalities) {
        if (ineq.a.size() != n) {
            throw InvalidArgument("conic subproblem: inequality row has the wrong length");
        }
    }
    if (sub.fixed_c && sub.fixed_c->size() != n) {
        throw InvalidArgument("conic subproblem: fixed c has the wrong length");
    }
}

// Fills c, grams and the honest post-solve residuals from a primal vector.
void extract(const ConicSubproblem& sub, const Layout& lay, const cone::ConeProgram& prog,
             const Eigen::VectorXd& x, SolveResult& out) {
    out.c = x.head(lay.n_c);
    out.grams.clear();
    out.min_eigenvalue = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < sub.sos.size(); ++s) {
        std::vector<Eigen::MatrixXd> blocks;
        for (std::size_t b = 0; b < sub.sos[s].block_sizes.size(); ++b) {
            const int d = sub.sos[s].block_sizes[b];
            Eigen::MatrixXd Q = cone::smat(x.segment(lay.offsets[s][b], cone::svec_size(d)), d);
            const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Q, Eigen::EigenvaluesOnly)
                                  .eigenvalues()
                                  .minCoeff();
            out.min_eigenvalue = std::min(out.min_eigenvalue, lo);
            blocks.push_back(std::move(Q));
        }
        out.grams.push_back(std::move(blocks));
    }
    if (!std::isfinite(out.min_eigenvalue)) {
        out.min_eigenvalue = 0.0;
    }
    out.equality_residual =
        prog.b.size() > 0 ? (prog.A * x - prog.b).norm() / std::max(1.0, prog.b.norm()) : 0.0;
    out.min_slack = std::numeric_limits<double>::infinity();
    for (const auto& ineq : sub.inequalities) {
        out.min_slack = std::min(out.min_slack, ineq.bound - ineq.a.dot(out.c));
    }
    if (!std::isfinite(out.min_slack)) {
        out.min_slack = 0.0;
    }
    out.objective = 0.0;
    if (sub.jacobian.size() > 0) {
        out.objective = 0.5 * (sub.residual + sub.jacobian * (out.c - sub.point)).squaredNorm();
    }
}

bool verified(const SolveResult& r) {
    return r.equality_residual <= verify_tol && r.min_eigenvalue >= -verify_tol &&
           r.min_slack >= -verify_tol;
}

} // namespace

cone::Settings solver_settings(const ProblemConfig& cfg) {
    cone::Settings s;
    s.feastol = cfg.solver_feastol;
    s.abstol = cfg.solver_gaptol;
    s.reltol = cfg.solver_gaptol;
    s.max_iter = cfg.solver_max_iter;
    return s;
}

SolveResult solve(const ConicSubproblem& sub, const cone::Settings& settings) {
    check_subproblem(sub);
    const auto start = std::chrono::steady_clock::now();
    const Layout lay = layout_of(sub);
    const cone::ConeProgram prog = build_program(sub, lay);

    SolveResult out;
    auto finish = [&]() {
        out.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    };

    if (sub.jacobian.size() == 0) {
        const cone::PhaseOne p1 = cone::phase_one(prog, settings);
        out.iterations = p1.iterations;
        if (p1.x.size() == lay.variables) {
            extract(sub, lay, prog, p1.x, out);
        }
        if (p1.status != cone::Status::optimal) {
            out.status = p1.status;
        } else if (p1.violation > verify_tol) {
            out.status = cone::Status::infeasible;
        } else {
            out.status = verified(out) ? cone::Status::optimal : cone::Status::numerical_failure;
        }
        return finish();
    }

    const cone::Solution sol = cone::solve(prog, settings);
    out.iterations = sol.iterations;
    if (sol.x.size() == lay.variables) {
        extract(sub, lay, prog, sol.x, out);
    }
    if (sol.status == cone::Status::optimal) {
        out.status = verified(out) ? cone::Status::optimal : cone::Status::numerical_failure;
        return finish();
    }
    // Distinguish an empty feasible set from a solver breakdown.
    const cone::PhaseOne p1 = cone::phase_one(prog, settings);
    out.iterations += p1.iterations;
    if (p1.status == cone::Status::optimal && p1.violation > verify_tol) {
        out.status = cone::Status::infeasible;
    } else {
        out.status = sol.status;
    }
    return finish();
}

ConicSubproblem make_sca_subproblem(const Eigen::VectorXd& c_k, const ResidualContext& ctx,
                                    const ProblemConfig& cfg, const SosConstraintSet& lower,
                                    const SosConstraintSet& upper) {
    const SpectralBasis& basis = *ctx.basis;
    ConicSubproblem sub;
    sub.coefficients = basis.size();
    sub.point = c_k;
    sub.residual = residual(c_k, ctx);
    sub.jacobian = jacobian(c_k, ctx);
    sub.sos = {lower, upper};

    sub.inequalities.push_back({basis.distance_weights(), cfg.L});

    // c' Lambda c >= eta L^2 / 4, replaced by its tangent plane at c_k.
    const Eigen::VectorXd lc = basis.eigenvalues().cwiseProduct(c_k);
    sub.inequalities.push_back({-2.0 * lc, -(cfg.eta * cfg.L * cfg.L / 4.0 + c_k.dot(lc))});
    return sub;
}

} // namespace mavel
