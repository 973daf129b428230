#pragma once

namespace propersplit {

/// Numerical thresholds shared by every analysis routine.
///
/// rank_tol_factor is multiplied by sigma_max * max(m, n) to obtain the
/// rank-decision cutoff of an SVD. sign_tol is the slack used by entrywise
/// sign predicates. residual_tol bounds relative identity residuals.
/// eig_tol is the slack for spectral comparisons against 1.
struct ToleranceConfig {
    double rank_tol_factor = 1e-12;
    double sign_tol = 1e-12;
    double residual_tol = 1e-10;
    double eig_tol = 1e-10;
};

/// Throws PreconditionFailed unless every field is strictly positive.
void validate(const ToleranceConfig& cfg);

}  // namespace propersplit
