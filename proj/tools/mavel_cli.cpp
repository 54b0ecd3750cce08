// Command-line front end: optimisation runs, baselines, parameter sweeps, the
// two-coefficient feasible region and the oracle suite, all emitted as CSV.

#include "mavel/baselines.hpp"
#include "mavel/config.hpp"
#include "mavel/errors.hpp"
#include "mavel/experiments.hpp"
#include "mavel/optimizer.hpp"
#include "mavel/sos.hpp"
#include "mavel/validation.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

enum Exit : int {
    ok = 0,
    failure = 1,
    infeasible = 2,
    nonconvergence = 3,
    config_error = 4,
};

struct GlobalOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    bool force = false;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
        }
        out += (ch == '\n') ? ' ' : ch;
    }
    return out + "\"";
}

int report_error(int code, const char* kind, const std::string& message) {
    std::cerr << "error code=" << code << " kind=" << kind << " message=" << quote(message) << '\n';
    return code;
}

mavel::ProblemConfig load(const GlobalOptions& g, mavel::ProblemConfig base = {}) {
    mavel::ProblemConfig cfg =
        g.config_path.empty() ? base : mavel::load_config(g.config_path, base);
    for (const auto& kv : g.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw mavel::ConfigError("--set expects key=value, got '" + kv + "'");
        }
        mavel::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (g.seed) {
        cfg.seed = *g.seed;
    }
    cfg.validate();
    return cfg;
}

void emit(const GlobalOptions& g, const std::string& name, const std::string& content) {
    const fs::path path = fs::path(g.out_dir) / name;
    mavel::write_output(path, content, g.force);
    std::cout << "wrote " << path.string() << '\n';
}

void print_summary(const char* what, const mavel::SchemeRun& run) {
    std::cout << what << ": scheme=" << mavel::to_string(run.scheme)
              << " ee=" << mavel::format_real(run.metrics.ee)
              << " variance=" << mavel::format_real(run.metrics.variance)
              << " energy=" << mavel::format_real(run.metrics.energy)
              << " distance=" << mavel::format_real(run.metrics.distance);
    if (run.trace) {
        std::cout << " outer_iters=" << run.trace->records.size() - 1;
    }
    if (run.ramp_time) {
        std::cout << " ramp_time=" << mavel::format_real(*run.ramp_time);
    }
    std::cout << '\n';
}

int cmd_run_scheme(const GlobalOptions& g, mavel::Scheme scheme, const char* what) {
    const mavel::ProblemConfig cfg = load(g);
    const mavel::SchemeRun run = mavel::run_scheme(scheme, cfg);
    emit(g, "profile.csv", mavel::profile_csv(run.profile));
    if (run.coefficients) {
        emit(g, "coefficients.csv", mavel::coefficients_csv(*run.coefficients));
    }
    if (run.trace) {
        emit(g, "trace.csv", mavel::trace_csv(*run.trace));
    }
    print_summary(what, run);
    return ok;
}

int cmd_trace(const GlobalOptions& g) {
    const mavel::ProblemConfig cfg = load(g);
    const mavel::OptimizationResult res = mavel::optimize(cfg);
    const std::string csv = mavel::trace_csv(res.trace);
    emit(g, "trace.csv", csv);
    std::cout << csv;
    return ok;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> values;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw mavel::ConfigError("--values: cannot parse '" + item + "'");
        }
    }
    if (values.empty()) {
        throw mavel::ConfigError("--values is empty");
    }
    return values;
}

int cmd_sweep(const GlobalOptions& g, const std::string& param, const std::string& values) {
    const mavel::ProblemConfig cfg = load(g);
    const auto p = mavel::parse_sweep_param(param);
    const auto rows = mavel::run_sweep(cfg, p, parse_values(values), g.jobs);
    emit(g, "sweep.csv", mavel::sweep_csv(rows));
    for (const auto& r : rows) {
        std::cout << mavel::to_string(r.param) << '=' << mavel::format_real(r.value) << ' '
                  << mavel::to_string(r.scheme) << " ee=" << mavel::format_real(r.ee)
                  << " status=" << r.status << '\n';
    }
    return ok;
}

int cmd_region(const GlobalOptions& g, const mavel::RegionGrid& grid) {
    mavel::ProblemConfig base;
    base.N = 2;
    base.V_max = 1.0;
    const mavel::ProblemConfig cfg = load(g, base);
    const auto points = mavel::rasterize_feasible_region(grid, cfg, g.jobs);
    emit(g, "region.csv", mavel::region_csv(points));
    std::size_t sos = 0, l1 = 0, l2 = 0, truth = 0;
    for (const auto& p : points) {
        sos += p.sos;
        l1 += p.l1;
        l2 += p.l2;
        truth += p.truth;
    }
    std::cout << "region: points=" << points.size() << " sos=" << sos << " l1=" << l1
              << " l2=" << l2 << " truth=" << truth << '\n';
    return ok;
}

int cmd_validate(const GlobalOptions& g) {
    const mavel::ProblemConfig cfg = load(g);
    bool all = true;
    for (const auto& check : mavel::run_validation(cfg, g.jobs)) {
        std::cout << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
        all = all && check.passed;
    }
    const mavel::MonteCarloReport mc = mavel::run_crb_check(cfg, 2000, 20.0, g.jobs);
    const bool mc_ok = mc.ratio >= 1.0 && mc.ratio <= 3.0;
    std::cout << (mc_ok ? "PASS " : "FAIL ") << "ml-mse-vs-crb: ratio "
              << mavel::format_real(mc.ratio, 4) << " at 20 dB over 2000 trials (band [1, 3])\n";
    emit(g, "mc.csv", mavel::mc_csv({mc}));
    return (all && mc_ok) ? ok : failure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-efficient velocity profiles for a movable sensing antenna"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--config", g.config_path, "key=value configuration file");
    app.add_option("--set", g.overrides, "override one configuration key (key=value); repeatable");
    app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
    app.add_flag("--force", g.force, "overwrite existing output files");
    app.add_option("--seed", g.seed, "random seed (overrides the config)");
    app.add_option("--jobs", g.jobs, "worker threads; 0 uses every core")->capture_default_str();

    auto* optimize = app.add_subcommand("optimize", "run the Dinkelbach/SCA optimiser");
    auto* baseline = app.add_subcommand("baseline", "evaluate one reference profile");
    std::string scheme = "sinusoidal";
    baseline->add_option("--type", scheme, "sinusoidal | uniform | binary | trapezoidal | proposed")
        ->required();
    auto* sweep = app.add_subcommand("sweep", "sweep one parameter over all five schemes");
    std::string param, values;
    sweep->add_option("--param", param, "alpha2 | T | L | N")->required();
    sweep->add_option("--values", values, "comma-separated list")->required();
    auto* region = app.add_subcommand("region", "rasterise the N = 2 feasible region");
    mavel::RegionGrid grid;
    double extent = 1.0;
    region->add_option("--points", grid.points, "grid points per axis")->capture_default_str();
    region->add_option("--extent", extent, "half-width of the square c-grid")->capture_default_str();
    auto* validate = app.add_subcommand("validate", "run the oracle suite and the CRB check");
    auto* trace = app.add_subcommand("trace", "print the Dinkelbach trace");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(config_error, "usage", e.what());
    }

    try {
        if (*optimize) {
            return cmd_run_scheme(g, mavel::Scheme::proposed, "optimize");
        }
        if (*baseline) {
            return cmd_run_scheme(g, mavel::parse_scheme(scheme), "baseline");
        }
        if (*sweep) {
            return cmd_sweep(g, param, values);
        }
        if (*region) {
            grid.c1_min = grid.c2_min = -extent;
            grid.c1_max = grid.c2_max = extent;
            return cmd_region(g, grid);
        }
        if (*validate) {
            return cmd_validate(g);
        }
        if (*trace) {
            return cmd_trace(g);
        }
    } catch (const mavel::InfeasibleError& e) {
        return report_error(infeasible, "infeasible", e.what());
    } catch (const mavel::ConvergenceError& e) {
        return report_error(nonconvergence, "non-convergence", e.what());
    } catch (const mavel::ConfigError& e) {
        return report_error(config_error, "config", e.what());
    } catch (const mavel::InvalidArgument& e) {
        return report_error(config_error, "invalid-argument", e.what());
    } catch (const mavel::OutputError& e) {
        return report_error(config_error, "output", e.what());
    } catch (const std::exception& e) {
        return report_error(failure, "internal", e.what());
    }
    return failure;
}
