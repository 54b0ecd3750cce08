#include "mavel/optimizer.hpp"

#include "mavel/conic.hpp"

#include <cmath>
#include <sstream>

namespace mavel {

InitialPoint initialize(const ProblemConfig& cfg, const SpectralBasis& basis) {
    cfg.validate();
    InitialPoint init;
    init.c = Eigen::VectorXd::Zero(basis.size());
    init.c(0) = std::min(cfg.V_max, cfg.L / cfg.T) * std::sqrt(cfg.T / 2.0);
    const double var = init.c.dot(basis.eigenvalues().cwiseProduct(init.c));
    const double e = cfg.alpha1 * init.c.squaredNorm() + cfg.alpha2 * cubic_moment(init.c, basis);
    init.xi = sensing_ee(var, e);
    return init;
}

ConstraintMaps build_constraint_maps(const ProblemConfig& cfg, const SpectralBasis& basis) {
    ConstraintMaps maps;
    maps.map = build_chebyshev_map(basis.size(), basis.duration(), cfg.V_max);
    maps.lower = assemble_lower_constraints(basis.size(), maps.map);
    maps.upper = assemble_upper_constraints(basis.size(), maps.map);
    return maps;
}

ProfileMetrics measure_spectral(const SpectralProfile& p, const ProblemConfig& cfg) {
    const std::vector<double> grid = uniform_grid(p.basis->duration(), cfg.grid_points);
    return measure(evaluate_profile(p, grid), cfg);
}

InnerResult sca_inner(const Eigen::VectorXd& c_start, double xi, const ProblemConfig& cfg,
                      const std::shared_ptr<const SpectralBasis>& basis,
                      const ConstraintMaps& maps) {
    const ResidualContext ctx = make_residual_context(basis, xi, cfg.alpha1, cfg.alpha2);
    const cone::Settings settings = solver_settings(cfg);
    InnerResult out;
    out.c = c_start;
    for (int k = 1; k <= cfg.max_inner; ++k) {
        const ConicSubproblem sub = make_sca_subproblem(out.c, ctx, cfg, maps.lower, maps.upper);
        const SolveResult res = solve(sub, settings);
        out.statuses.push_back(res.status);
        out.iterations = k;
        if (res.status == cone::Status::infeasible) {
            throw InfeasibleError("SCA subproblem infeasible at inner iteration " +
                                  std::to_string(k) +
                                  " (QoS floor incompatible with distance/speed limits)");
        }
        if (res.status != cone::Status::optimal) {
            throw ConvergenceError("SCA subproblem ended with status " +
                                   std::string(cone::to_string(res.status)) +
                                   " at inner iteration " + std::to_string(k));
        }
        out.step_norm = (res.c - out.c).norm();
        out.c = res.c;
        if (out.step_norm <= cfg.eps_in) {
            break;
        }
    }
    return out;
}

OptimizationResult optimize(const ProblemConfig& cfg) {
    cfg.validate();
    const auto basis = build_basis(cfg.N, cfg.T);
    const ConstraintMaps maps = build_constraint_maps(cfg, *basis);
    const InitialPoint init = initialize(cfg, *basis);

    DinkelbachTrace trace;
    Eigen::VectorXd c = init.c;
    double xi = init.xi;
    {
        OuterRecord r;
        r.xi = xi;
        r.variance = spectral_variance({c, basis});
        r.energy = spectral_energy({c, basis}, cfg);
        trace.records.push_back(std::move(r));
    }

    for (int i = 1; i <= cfg.max_outer; ++i) {
        InnerResult inner = sca_inner(c, xi, cfg, basis, maps);
        c = inner.c;
        const ProfileMetrics m = measure_spectral({c, basis}, cfg);

        OuterRecord r;
        r.iter = i;
        r.xi = m.ee;
        r.variance = m.variance;
        r.energy = m.energy;
        r.inner_iters = inner.iterations;
        r.inner_step_norm = inner.step_norm;
        r.statuses = std::move(inner.statuses);
        trace.records.push_back(std::move(r));

        const double change = std::abs(m.ee - xi);
        xi = m.ee;
        if (change <= cfg.eps_out) {
            OptimizationResult out;
            out.profile = {c, basis};
            out.trace = std::move(trace);
            out.variance = m.variance;
            out.energy = m.energy;
            out.ee = m.ee;
            return out;
        }
    }
    std::ostringstream msg;
    msg << "Dinkelbach loop did not reach |dxi| <= " << cfg.eps_out << " within "
        << cfg.max_outer << " outer iterations";
    throw DinkelbachNotConverged(msg.str(), std::move(trace), c);
}

} // namespace mavel
