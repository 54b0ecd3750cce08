#pragma once

#include "mavel/config.hpp"
#include "mavel/sensing.hpp"

#include <string>
#include <vector>

namespace mavel {

// =============================================================================
// Oracle suite behind the `validate` command
// =============================================================================

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Numerical cross-checks of the library against independent evaluations:
/// kernel vs direct variance, tensor closed form vs quadrature, Jacobian vs finite
/// differences, Mercer reconstruction, SOS certificate soundness and the baseline
/// reference values. Random draws use cfg.seed; oracle values use default physics.
std::vector<ValidationCheck> run_validation(const ProblemConfig& cfg, int jobs = 0);

/// Monte-Carlo MSE of the grid ML estimator vs the CRB along the sinusoidal
/// baseline trajectory at cfg's defaults (2000 trials, 20 dB).
MonteCarloReport run_crb_check(const ProblemConfig& cfg, int trials = 2000, double snr_db = 20.0,
                               int jobs = 0);

} // namespace mavel
