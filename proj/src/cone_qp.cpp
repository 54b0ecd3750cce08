#include "mavel/cone_qp.hpp"

#include "mavel/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace mavel::cone {

namespace {

constexpr double sqrt2 = std::numbers::sqrt2;
constexpr double inf = std::numeric_limits<double>::infinity();

// -----------------------------------------------------------------------------
// Nesterov-Todd scaling W with W^{-T} s = W z = lambda
// -----------------------------------------------------------------------------

struct Scaling {
    Eigen::VectorXd w;                 // orthant: sqrt(s/z)
    std::vector<Eigen::MatrixXd> r;    // PSD: W(Z) = r' Z r
    std::vector<Eigen::MatrixXd> rti;  // r^{-T}
    Eigen::VectorXd lambda;            // orthant part, then block eigenvalues
};

template <typename Fn>
void for_each_block(const ConeDims& cones, Fn&& fn) {
    int offset = cones.nonneg;
    int lambda_offset = cones.nonneg;
    for (std::size_t b = 0; b < cones.psd.size(); ++b) {
        const int d = cones.psd[b];
        fn(b, d, offset, lambda_offset);
        offset += svec_size(d);
        lambda_offset += d;
    }
}

std::optional<Scaling> nt_scaling(const Eigen::VectorXd& s, const Eigen::VectorXd& z,
                                  const ConeDims& cones) {
    Scaling W;
    const int l = cones.nonneg;
    W.w.resize(l);
    W.lambda.resize(cones.degree());
    for (int i = 0; i < l; ++i) {
        if (!(s(i) > 0.0) || !(z(i) > 0.0)) {
            return std::nullopt;
        }
        W.w(i) = std::sqrt(s(i) / z(i));
        W.lambda(i) = std::sqrt(s(i) * z(i));
    }
    bool ok = true;
    for_each_block(cones, [&](std::size_t, int d, int off, int loff) {
        if (!ok) {
            return;
        }
        Eigen::LLT<Eigen::MatrixXd> cs(smat(s.segment(off, svec_size(d)), d));
        Eigen::LLT<Eigen::MatrixXd> cz(smat(z.segment(off, svec_size(d)), d));
        if (cs.info() != Eigen::Success || cz.info() != Eigen::Success) {
            ok = false;
            return;
        }
        const Eigen::MatrixXd L1 = cs.matrixL();
        const Eigen::MatrixXd L2 = cz.matrixL();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(L2.transpose() * L1,
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::VectorXd sigma = svd.singularValues();
        if (!(sigma.minCoeff() > 0.0)) {
            ok = false;
            return;
        }
        const Eigen::VectorXd isq = sigma.cwiseSqrt().cwiseInverse();
        W.r.push_back(L1 * svd.matrixV() * isq.asDiagonal());
        W.rti.push_back(L2 * svd.matrixU() * isq.asDiagonal());
        W.lambda.segment(loff, d) = sigma;
    });
    if (!ok) {
        return std::nullopt;
    }
    return W;
}

enum class Map { W, Wt, WinvT };

Eigen::VectorXd apply(const Scaling& W, Map which, const Eigen::VectorXd& v, const ConeDims& cones) {
    Eigen::VectorXd out(v.size());
    const int l = cones.nonneg;
    if (which == Map::WinvT) {
        out.head(l) = v.head(l).cwiseQuotient(W.w);
    } else {
        out.head(l) = v.head(l).cwiseProduct(W.w);
    }
    for_each_block(cones, [&](std::size_t b, int d, int off, int) {
        const Eigen::MatrixXd V = smat(v.segment(off, svec_size(d)), d);
        Eigen::MatrixXd R;
        switch (which) {
        case Map::W: R = W.r[b].transpose() * V * W.r[b]; break;
        case Map::Wt: R = W.r[b] * V * W.r[b].transpose(); break;
        case Map::WinvT: R = W.rti[b].transpose() * V * W.rti[b]; break;
        }
        out.segment(off, svec_size(d)) = svec(R);
    });
    return out;
}

// Dense block-diagonal matrix of W'W acting on svec coordinates.
Eigen::MatrixXd wtw_matrix(const Scaling& W, const ConeDims& cones) {
    const int m = cones.dimension();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
    const int l = cones.nonneg;
    for (int i = 0; i < l; ++i) {
        H(i, i) = W.w(i) * W.w(i);
    }
    for_each_block(cones, [&](std::size_t b, int d, int off, int) {
        const int k = svec_size(d);
        const Eigen::MatrixXd RRt = W.r[b] * W.r[b].transpose();
        for (int j = 0; j < k; ++j) {
            const Eigen::MatrixXd E = smat(Eigen::VectorXd::Unit(k, j), d);
            H.block(off, off + j, k, 1) = svec(RRt * E * RRt);
        }
    });
    return H;
}

// x o y for two cone vectors: elementwise on the orthant, (XY + YX)/2 on blocks.
Eigen::VectorXd jordan_product(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                               const ConeDims& cones) {
    Eigen::VectorXd out(x.size());
    const int l = cones.nonneg;
    out.head(l) = x.head(l).cwiseProduct(y.head(l));
    for_each_block(cones, [&](std::size_t, int d, int off, int) {
        const int k = svec_size(d);
        const Eigen::MatrixXd X = smat(x.segment(off, k), d);
        const Eigen::MatrixXd Y = smat(y.segment(off, k), d);
        out.segment(off, k) = svec(0.5 * (X * Y + Y * X));
    });
    return out;
}

// lambda o u (multiply=true) or its inverse lambda <> u, lambda diagonal per block.
Eigen::VectorXd lambda_op(const Eigen::VectorXd& lambda, const Eigen::VectorXd& u,
                          const ConeDims& cones, bool multiply) {
    Eigen::VectorXd out(u.size());
    const int l = cones.nonneg;
    for (int i = 0; i < l; ++i) {
        out(i) = multiply ? lambda(i) * u(i) : u(i) / lambda(i);
    }
    for_each_block(cones, [&](std::size_t, int d, int off, int loff) {
        int idx = off;
        for (int j = 0; j < d; ++j) {
            for (int i = j; i < d; ++i, ++idx) {
                const double f = 0.5 * (lambda(loff + i) + lambda(loff + j));
                out(idx) = multiply ? f * u(idx) : u(idx) / f;
            }
        }
    });
    return out;
}

Eigen::VectorXd lambda_squared(const Eigen::VectorXd& lambda, const ConeDims& cones) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(cones.dimension());
    const int l = cones.nonneg;
    out.head(l) = lambda.head(l).cwiseAbs2();
    for_each_block(cones, [&](std::size_t, int d, int off, int loff) {
        int idx = off;
        for (int j = 0; j < d; ++j) {
            out(idx) = lambda(loff + j) * lambda(loff + j);
            idx += d - j;
        }
    });
    return out;
}

// Largest alpha with v + alpha dv in the cone (v interior); +inf if unbounded.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv, const ConeDims& cones) {
    double alpha = inf;
    for (int i = 0; i < cones.nonneg; ++i) {
        if (dv(i) < 0.0) {
            alpha = std::min(alpha, -v(i) / dv(i));
        }
    }
    for_each_block(cones, [&](std::size_t, int d, int off, int) {
        const int k = svec_size(d);
        Eigen::LLT<Eigen::MatrixXd> chol(smat(v.segment(off, k), d));
        if (chol.info() != Eigen::Success) {
            alpha = 0.0;
            return;
        }
        const Eigen::MatrixXd Li = chol.matrixL().solve(Eigen::MatrixXd::Identity(d, d));
        const Eigen::MatrixXd M = Li * smat(dv.segment(off, k), d) * Li.transpose();
        const double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(M, Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff();
        if (lo < 0.0) {
            alpha = std::min(alpha, -1.0 / lo);
        }
    });
    return alpha;
}

// Moves v into the interior when it is not already comfortably there.
void shift_into_cone(Eigen::VectorXd& v, const ConeDims& cones) {
    const double t = -min_cone_eigenvalue(v, cones);
    if (t >= -1e-8 * std::max(v.norm(), 1.0)) {
        v += (1.0 + t) * cone_identity(cones);
    }
}

class KktSystem {
public:
    KktSystem(const ConeProgram& prog, const Eigen::MatrixXd& H) {
        const int n = prog.variables();
        const int p = static_cast<int>(prog.b.size());
        const int m = static_cast<int>(prog.h.size());
        K_ = Eigen::MatrixXd::Zero(n + p + m, n + p + m);
        if (prog.P.size() > 0) {
            K_.topLeftCorner(n, n) = prog.P;
        }
        if (p > 0) {
            K_.block(0, n, n, p) = prog.A.transpose();
            K_.block(n, 0, p, n) = prog.A;
        }
        K_.block(0, n + p, n, m) = prog.G.transpose();
        K_.block(n + p, 0, m, n) = prog.G;
        K_.block(n + p, n + p, m, m) = -H;
        lu_.compute(K_);
    }

    [[nodiscard]] Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
        Eigen::VectorXd sol = lu_.solve(rhs);
        for (int pass = 0; pass < 2; ++pass) {
            sol += lu_.solve(rhs - K_ * sol);
        }
        return sol;
    }

private:
    Eigen::MatrixXd K_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

double objective(const ConeProgram& prog, const Eigen::VectorXd& x) {
    double val = prog.q.dot(x);
    if (prog.P.size() > 0) {
        val += 0.5 * x.dot(prog.P * x);
    }
    return val;
}

void check_shapes(const ConeProgram& prog) {
    const auto n = prog.q.size();
    const auto m = prog.cones.dimension();
    const bool ok = (prog.P.size() == 0 || (prog.P.rows() == n && prog.P.cols() == n)) &&
                    prog.A.cols() == (prog.A.rows() == 0 ? prog.A.cols() : n) &&
                    prog.A.rows() == prog.b.size() && prog.G.rows() == m && prog.G.cols() == n &&
                    prog.h.size() == m;
    if (!ok) {
        throw InvalidArgument("cone program: inconsistent dimensions");
    }
    if (!prog.q.allFinite() || !prog.b.allFinite() || !prog.h.allFinite() ||
        !prog.G.allFinite() || !prog.A.allFinite() || !prog.P.allFinite()) {
        throw InvalidArgument("cone program: non-finite data");
    }
}

} // namespace

// =============================================================================
// Public helpers
// =============================================================================

int ConeDims::dimension() const {
    int m = nonneg;
    for (int d : psd) {
        m += svec_size(d);
    }
    return m;
}

int ConeDims::degree() const {
    int k = nonneg;
    for (int d : psd) {
        k += d;
    }
    return k;
}

const char* to_string(Status s) {
    switch (s) {
    case Status::optimal: return "optimal";
    case Status::infeasible: return "infeasible";
    case Status::iteration_limit: return "iteration-limit";
    case Status::numerical_failure: return "numerical-failure";
    }
    return "unknown";
}

int svec_size(int order) { return order * (order + 1) / 2; }

Eigen::VectorXd svec(const Eigen::MatrixXd& X) {
    const int d = static_cast<int>(X.rows());
    Eigen::VectorXd v(svec_size(d));
    int idx = 0;
    for (int j = 0; j < d; ++j) {
        for (int i = j; i < d; ++i) {
            v(idx++) = (i == j) ? X(i, j) : sqrt2 * 0.5 * (X(i, j) + X(j, i));
        }
    }
    return v;
}

Eigen::MatrixXd smat(const Eigen::Ref<const Eigen::VectorXd>& v, int order) {
    Eigen::MatrixXd X(order, order);
    int idx = 0;
    for (int j = 0; j < order; ++j) {
        for (int i = j; i < order; ++i) {
            const double val = (i == j) ? v(idx) : v(idx) / sqrt2;
            X(i, j) = val;
            X(j, i) = val;
            ++idx;
        }
    }
    return X;
}

double min_cone_eigenvalue(const Eigen::VectorXd& v, const ConeDims& cones) {
    double lo = inf;
    for (int i = 0; i < cones.nonneg; ++i) {
        lo = std::min(lo, v(i));
    }
    for_each_block(cones, [&](std::size_t, int d, int off, int) {
        const Eigen::MatrixXd X = smat(v.segment(off, svec_size(d)), d);
        lo = std::min(lo, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(X, Eigen::EigenvaluesOnly)
                              .eigenvalues()
                              .minCoeff());
    });
    return lo;
}

Eigen::VectorXd cone_identity(const ConeDims& cones) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(cones.dimension());
    e.head(cones.nonneg).setOnes();
    for_each_block(cones, [&](std::size_t, int d, int off, int) {
        e.segment(off, svec_size(d)) = svec(Eigen::MatrixXd::Identity(d, d));
    });
    return e;
}

// =============================================================================
// Interior-point method
// =============================================================================

Solution solve(const ConeProgram& prog, const Settings& settings) {
    check_shapes(prog);
    const ConeDims& cones = prog.cones;
    const int n = prog.variables();
    const int p = static_cast<int>(prog.b.size());
    const int m = cones.dimension();
    const double degree = std::max(1, cones.degree());

    const double resx0 = std::max(1.0, prog.q.norm());
    const double resy0 = std::max(1.0, prog.b.norm());
    const double resz0 = std::max(1.0, prog.h.norm());

    Solution sol;

    // Starting point from the W = I system.
    {
        const KktSystem kkt(prog, Eigen::MatrixXd::Identity(m, m));
        Eigen::VectorXd rhs(n + p + m);
        rhs << -prog.q, prog.b, prog.h;
        const Eigen::VectorXd v = kkt.solve(rhs);
        if (!v.allFinite()) {
            sol.status = Status::numerical_failure;
            return sol;
        }
        sol.x = v.head(n);
        sol.y = v.segment(n, p);
        sol.z = v.tail(m);
        sol.s = -sol.z;
        shift_into_cone(sol.s, cones);
        shift_into_cone(sol.z, cones);
    }

    const Eigen::VectorXd e = cone_identity(cones);
    Eigen::VectorXd& x = sol.x;
    Eigen::VectorXd& y = sol.y;
    Eigen::VectorXd& s = sol.s;
    Eigen::VectorXd& z = sol.z;

    for (int iter = 0;; ++iter) {
        Eigen::VectorXd rx = prog.q + prog.G.transpose() * z;
        if (p > 0) {
            rx += prog.A.transpose() * y;
        }
        if (prog.P.size() > 0) {
            rx += prog.P * x;
        }
        const Eigen::VectorXd ry = p > 0 ? Eigen::VectorXd(prog.A * x - prog.b) : Eigen::VectorXd();
        const Eigen::VectorXd rz = prog.G * x + s - prog.h;

        const double gap = s.dot(z);
        const double mu = gap / degree;
        const double pcost = objective(prog, x);
        const double dcost = pcost + (p > 0 ? y.dot(ry) : 0.0) + z.dot(rz) - gap;
        const double pres = std::max(p > 0 ? ry.norm() / resy0 : 0.0, rz.norm() / resz0);
        const double dres = rx.norm() / resx0;
        double relgap = inf;
        if (pcost < 0.0) {
            relgap = gap / -pcost;
        } else if (dcost > 0.0) {
            relgap = gap / dcost;
        }

        sol.iterations = iter;
        sol.primal_objective = pcost;
        sol.gap = gap;
        sol.primal_residual = pres;
        sol.dual_residual = dres;

        if (pres <= settings.feastol && dres <= settings.feastol &&
            (gap <= settings.abstol || relgap <= settings.reltol)) {
            sol.status = Status::optimal;
            return sol;
        }
        if (iter >= settings.max_iter) {
            sol.status = Status::iteration_limit;
            return sol;
        }
        if (!x.allFinite() || x.norm() > 1e14 || z.norm() > 1e14) {
            sol.status = Status::numerical_failure;
            return sol;
        }

        const auto W = nt_scaling(s, z, cones);
        if (!W) {
            sol.status = Status::numerical_failure;
            return sol;
        }
        const KktSystem kkt(prog, wtw_matrix(*W, cones));
        const Eigen::MatrixXd H = wtw_matrix(*W, cones);

        // Solves the linearised KKT system for complementarity target `bs`.
        auto newton = [&](const Eigen::VectorXd& bs, Eigen::VectorXd& dx, Eigen::VectorXd& dy,
                          Eigen::VectorXd& ds, Eigen::VectorXd& dz) {
            const Eigen::VectorXd u = lambda_op(W->lambda, bs, cones, false);
            const Eigen::VectorXd Wtu = apply(*W, Map::Wt, u, cones);
            Eigen::VectorXd rhs(n + p + m);
            rhs << -rx, (p > 0 ? Eigen::VectorXd(-ry) : Eigen::VectorXd()), -rz - Wtu;
            const Eigen::VectorXd d = kkt.solve(rhs);
            dx = d.head(n);
            dy = d.segment(n, p);
            dz = d.tail(m);
            ds = Wtu - H * dz;
        };

        Eigen::VectorXd dx, dy, ds, dz;
        const Eigen::VectorXd lsq = lambda_squared(W->lambda, cones);

        newton(-lsq, dx, dy, ds, dz);
        const double alpha_aff = std::min({1.0, max_step(s, ds, cones), max_step(z, dz, cones)});
        const double sigma = std::pow(1.0 - alpha_aff, 3);

        const Eigen::VectorXd corr =
            jordan_product(apply(*W, Map::WinvT, ds, cones), apply(*W, Map::W, dz, cones), cones);
        newton(-lsq - corr + sigma * mu * e, dx, dy, ds, dz);
        const double alpha =
            std::min({1.0, settings.step_fraction * max_step(s, ds, cones),
                      settings.step_fraction * max_step(z, dz, cones)});
        if (!(alpha > 1e-14) || !dx.allFinite()) {
            sol.status = Status::numerical_failure;
            return sol;
        }

        x += alpha * dx;
        if (p > 0) {
            y += alpha * dy;
        }
        s += alpha * ds;
        z += alpha * dz;
    }
}

PhaseOne phase_one(const ConeProgram& prog, const Settings& settings) {
    check_shapes(prog);
    const int n = prog.variables();
    const int l = prog.cones.nonneg;
    const int m = prog.cones.dimension();
    const Eigen::VectorXd e = cone_identity(prog.cones);

    // Variables (x, t); the extra orthant row encodes t >= -1.
    ConeProgram aux;
    aux.q = Eigen::VectorXd::Unit(n + 1, n);
    aux.A = Eigen::MatrixXd::Zero(prog.A.rows(), n + 1);
    aux.A.leftCols(n) = prog.A;
    aux.b = prog.b;
    aux.cones = prog.cones;
    aux.cones.nonneg = l + 1;
    aux.G = Eigen::MatrixXd::Zero(m + 1, n + 1);
    aux.h = Eigen::VectorXd::Zero(m + 1);
    aux.G.topLeftCorner(l, n) = prog.G.topRows(l);
    aux.G.block(0, n, l, 1) = -e.head(l);
    aux.h.head(l) = prog.h.head(l);
    aux.G(l, n) = -1.0;
    aux.h(l) = 1.0;
    aux.G.bottomLeftCorner(m - l, n) = prog.G.bottomRows(m - l);
    aux.G.block(l + 1, n, m - l, 1) = -e.tail(m - l);
    aux.h.tail(m - l) = prog.h.tail(m - l);

    const Solution sol = solve(aux, settings);
    PhaseOne out;
    out.status = sol.status;
    out.iterations = sol.iterations;
    if (sol.x.size() == n + 1) {
        out.x = sol.x.head(n);
        out.violation = sol.x(n);
        out.s = prog.h - prog.G * out.x;
    }
    return out;
}

} // namespace mavel::cone
