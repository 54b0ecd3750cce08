#pragma once

#include "mavel/config.hpp"
#include "mavel/functionals.hpp"
#include "mavel/optimizer.hpp"
#include "mavel/sensing.hpp"
#include "mavel/sos.hpp"

#include <Eigen/Dense>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace mavel {

// =============================================================================
// Schemes
// =============================================================================

enum class Scheme { proposed, sinusoidal, uniform, binary, trapezoidal };

inline constexpr std::array<Scheme, 5> all_schemes{Scheme::proposed, Scheme::sinusoidal,
                                                   Scheme::uniform, Scheme::binary,
                                                   Scheme::trapezoidal};

const char* to_string(Scheme s);
Scheme parse_scheme(const std::string& name); ///< throws ConfigError

struct SchemeRun {
    Scheme scheme = Scheme::proposed;
    SampledProfile profile;
    ProfileMetrics metrics;
    std::optional<Eigen::VectorXd> coefficients; ///< proposed only
    std::optional<DinkelbachTrace> trace;        ///< proposed only
    std::optional<double> ramp_time;             ///< trapezoidal only
};

/// Runs one scheme at cfg. Errors propagate (InfeasibleError, ConvergenceError, ...).
SchemeRun run_scheme(Scheme scheme, const ProblemConfig& cfg);

// =============================================================================
// Parameter sweeps
// =============================================================================

enum class SweepParam { alpha2, T, L, N };

const char* to_string(SweepParam p);
SweepParam parse_sweep_param(const std::string& name); ///< throws ConfigError

/// Copy of cfg with the swept parameter set; N must be a positive integer.
ProblemConfig with_sweep_value(const ProblemConfig& cfg, SweepParam p, double value);

struct SweepRow {
    SweepParam param = SweepParam::alpha2;
    double value = 0.0;
    Scheme scheme = Scheme::proposed;
    double variance = 0.0;
    double energy = 0.0;
    double ee = 0.0;
    std::string status; ///< ok | infeasible | non-convergence | degenerate
};

/// Every (value, scheme) pair, evaluated on up to `jobs` threads and returned in
/// value-major, scheme-minor order regardless of completion order.
std::vector<SweepRow> run_sweep(const ProblemConfig& cfg, SweepParam p,
                                const std::vector<double>& values, int jobs = 0);

// =============================================================================
// CSV output
// =============================================================================

/// Shortest general-format representation with `digits` significant digits.
std::string format_real(double x, int digits = 9);

std::string profile_csv(const SampledProfile& velocity);          ///< t,v,x
std::string coefficients_csv(const Eigen::VectorXd& c);           ///< n,c_n
std::string trace_csv(const DinkelbachTrace& trace);              ///< iter,xi,variance,energy,inner_iters,inner_step_norm
std::string sweep_csv(const std::vector<SweepRow>& rows);         ///< param,value,scheme,variance,energy,ee,status
std::string region_csv(const std::vector<RegionPoint>& points);   ///< c1,c2,sos,l1,l2,truth
std::string mc_csv(const std::vector<MonteCarloReport>& reports); ///< snr_db,trials,mse,crb,ratio

/// Writes via a temporary file and rename. Refuses to replace an existing file
/// unless `force`; throws OutputError.
void write_output(const std::filesystem::path& path, const std::string& content, bool force);

} // namespace mavel
