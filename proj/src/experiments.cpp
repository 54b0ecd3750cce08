#include "mavel/experiments.hpp"

#include "mavel/baselines.hpp"
#include "mavel/errors.hpp"
#include "mavel/parallel.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace mavel {

const char* to_string(Scheme s) {
    switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::sinusoidal: return "sinusoidal";
    case Scheme::uniform: return "uniform";
    case Scheme::binary: return "binary";
    case Scheme::trapezoidal: return "trapezoidal";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name) {
    for (Scheme s : all_schemes) {
        if (name == to_string(s)) {
            return s;
        }
    }
    throw ConfigError("unknown scheme '" + name +
                      "' (expected proposed, sinusoidal, uniform, binary or trapezoidal)");
}

SchemeRun run_scheme(Scheme scheme, const ProblemConfig& cfg) {
    cfg.validate();
    SchemeRun run;
    run.scheme = scheme;
    switch (scheme) {
    case Scheme::proposed: {
        OptimizationResult opt = optimize(cfg);
        run.profile = evaluate_profile(opt.profile, uniform_grid(cfg.T, cfg.grid_points));
        run.coefficients = opt.profile.c;
        run.trace = std::move(opt.trace);
        break;
    }
    case Scheme::sinusoidal: run.profile = sinusoidal_profile(cfg); break;
    case Scheme::uniform: run.profile = uniform_profile(cfg); break;
    case Scheme::binary: run.profile = binary_profile(cfg); break;
    case Scheme::trapezoidal: {
        TrapezoidResult best = trapezoidal_profile(cfg);
        run.profile = std::move(best.profile);
        run.ramp_time = best.ramp_time;
        break;
    }
    }
    run.metrics = measure(run.profile, cfg);
    return run;
}

const char* to_string(SweepParam p) {
    switch (p) {
    case SweepParam::alpha2: return "alpha2";
    case SweepParam::T: return "T";
    case SweepParam::L: return "L";
    case SweepParam::N: return "N";
    }
    return "unknown";
}

SweepParam parse_sweep_param(const std::string& name) {
    for (SweepParam p : {SweepParam::alpha2, SweepParam::T, SweepParam::L, SweepParam::N}) {
        if (name == to_string(p)) {
            return p;
        }
    }
    throw ConfigError("unknown sweep parameter '" + name + "' (expected alpha2, T, L or N)");
}

ProblemConfig with_sweep_value(const ProblemConfig& cfg, SweepParam p, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw ConfigError("sweep values must be positive, got " + format_real(value));
    }
    ProblemConfig out = cfg;
    switch (p) {
    case SweepParam::alpha2: out.alpha2 = value; break;
    case SweepParam::T: out.T = value; break;
    case SweepParam::L: out.L = value; break;
    case SweepParam::N:
        if (value != std::floor(value)) {
            throw ConfigError("sweep over N needs integer values, got " + format_real(value));
        }
        out.N = static_cast<int>(value);
        break;
    }
    return out;
}

std::vector<SweepRow> run_sweep(const ProblemConfig& cfg, SweepParam p,
                                const std::vector<double>& values, int jobs) {
    std::vector<ProblemConfig> configs;
    for (double v : values) {
        configs.push_back(with_sweep_value(cfg, p, v));
        configs.back().validate();
    }
    const std::size_t S = all_schemes.size();
    std::vector<SweepRow> rows(values.size() * S);
    parallel_for(rows.size(), jobs, [&](std::size_t idx) {
        SweepRow& row = rows[idx];
        row.param = p;
        row.value = values[idx / S];
        row.scheme = all_schemes[idx % S];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.variance = row.energy = row.ee = nan;
        try {
            const SchemeRun run = run_scheme(row.scheme, configs[idx / S]);
            row.variance = run.metrics.variance;
            row.energy = run.metrics.energy;
            row.ee = run.metrics.ee;
            row.status = "ok";
        } catch (const InfeasibleError&) {
            row.status = "infeasible";
        } catch (const ConvergenceError&) {
            row.status = "non-convergence";
        } catch (const DegenerateProfileError&) {
            row.status = "degenerate";
        }
    });
    return rows;
}

std::string format_real(double x, int digits) {
    if (std::isnan(x)) {
        return "nan";
    }
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

std::string profile_csv(const SampledProfile& velocity) {
    const SampledProfile x = integrate_trajectory(velocity);
    std::ostringstream os;
    os << "t,v,x\n";
    for (std::size_t i = 0; i < velocity.size(); ++i) {
        os << format_real(velocity.t[i]) << ',' << format_real(velocity.v[i]) << ','
           << format_real(x.v[i]) << '\n';
    }
    return os.str();
}

std::string coefficients_csv(const Eigen::VectorXd& c) {
    std::ostringstream os;
    os << "n,c_n\n";
    for (Eigen::Index n = 0; n < c.size(); ++n) {
        os << n + 1 << ',' << format_real(c(n)) << '\n';
    }
    return os.str();
}

std::string trace_csv(const DinkelbachTrace& trace) {
    std::ostringstream os;
    os << "iter,xi,variance,energy,inner_iters,inner_step_norm\n";
    for (const auto& r : trace.records) {
        os << r.iter << ',' << format_real(r.xi) << ',' << format_real(r.variance) << ','
           << format_real(r.energy) << ',' << r.inner_iters << ','
           << format_real(r.inner_step_norm) << '\n';
    }
    return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "param,value,scheme,variance,energy,ee,status\n";
    for (const auto& r : rows) {
        os << to_string(r.param) << ',' << format_real(r.value) << ',' << to_string(r.scheme) << ','
           << format_real(r.variance) << ',' << format_real(r.energy) << ',' << format_real(r.ee)
           << ',' << r.status << '\n';
    }
    return os.str();
}

std::string region_csv(const std::vector<RegionPoint>& points) {
    std::ostringstream os;
    os << "c1,c2,sos,l1,l2,truth\n";
    for (const auto& p : points) {
        os << format_real(p.c1, 6) << ',' << format_real(p.c2, 6) << ',' << int(p.sos) << ','
           << int(p.l1) << ',' << int(p.l2) << ',' << int(p.truth) << '\n';
    }
    return os.str();
}

std::string mc_csv(const std::vector<MonteCarloReport>& reports) {
    std::ostringstream os;
    os << "snr_db,trials,mse,crb,ratio\n";
    for (const auto& r : reports) {
        os << format_real(r.snr_db) << ',' << r.trials << ',' << format_real(r.mse) << ','
           << format_real(r.crb) << ',' << format_real(r.ratio) << '\n';
    }
    return os.str();
}

void write_output(const std::filesystem::path& path, const std::string& content, bool force) {
    namespace fs = std::filesystem;
    if (fs::exists(path) && !force) {
        throw OutputError("refusing to overwrite '" + path.string() + "' (use --force)");
    }
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw OutputError("cannot create directory '" + path.parent_path().string() +
                              "': " + ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw OutputError("cannot write '" + tmp.string() + "'");
        }
        out << content;
        if (!out.flush()) {
            throw OutputError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw OutputError("cannot move '" + tmp.string() + "' into place: " + ec.message());
    }
}

} // namespace mavel
