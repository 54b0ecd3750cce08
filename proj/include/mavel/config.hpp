#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mavel {

// =============================================================================
// Problem configuration
// =============================================================================

/**
 * @brief Physical, kinematic and numerical parameters of one velocity-profile run.
 *
 * Defaults reproduce the reference simulation setup: a 4 m track traversed
 * within 1 s by a 0.1 kg antenna, N = 11 spectral modes.
 */
struct ProblemConfig {
    double T = 1.0;       ///< sensing interval [s]
    double L = 4.0;       ///< track length [m]
    double V_max = 10.0;  ///< speed limit [m/s]
    double m_a = 0.1;     ///< antenna mass [kg]
    double alpha1 = 0.2;  ///< linear damping [kg/s]
    double alpha2 = 0.1;  ///< quadratic drag [kg/m]
    double eta = 0.1;     ///< QoS fraction of the L^2/4 variance ceiling
    int N = 11;           ///< truncation order

    double eps_out = 1e-6; ///< Dinkelbach tolerance on |xi_i - xi_{i-1}|
    double eps_in = 1e-6;  ///< SCA tolerance on ||c^k - c^{k-1}||
    int max_inner = 50;
    int max_outer = 100;

    int grid_points = 4001;               ///< quadrature grid size
    bool include_terminal_kinetic = true; ///< keep m_a v(T)^2 / 2 in the energy

    double solver_feastol = 1e-9;
    double solver_gaptol = 1e-9;
    int solver_max_iter = 100;

    int trapezoid_candidates = 2000;

    // Sensing-model constants for the Monte-Carlo check; not tied to any figure.
    double wavelength = 0.1;
    double noise_power = 1.0;
    double pilot_power = 1.0;
    double gain = 1.0;
    int snapshots = 256;
    int theta_grid = 4096;
    std::uint64_t seed = 1;

    /// Throws InvalidArgument on any violated invariant.
    void validate() const;
};

/// Assigns one `key=value` pair; unknown keys and unparsable values throw ConfigError.
void apply_override(ProblemConfig& cfg, const std::string& key, const std::string& value);

/// Parses a flat `key = value` file with `#` comments on top of `base`.
ProblemConfig load_config(const std::filesystem::path& path, ProblemConfig base = {});

/// Parses `key=value` text on top of `base`; `origin` is used in error messages.
ProblemConfig parse_config(const std::string& text, const std::string& origin = "<string>",
                           ProblemConfig base = {});

/// All recognised keys with their current values, in a stable order.
std::vector<std::pair<std::string, std::string>> describe(const ProblemConfig& cfg);

} // namespace mavel
