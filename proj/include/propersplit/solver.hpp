#pragma once

#include <optional>
#include <vector>

#include "propersplit/matrix.hpp"
#include "propersplit/multisplitting.hpp"
#include "propersplit/splitting.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

struct SolveConfig {
    int max_iters = 10000;
    double step_tol = 1e-10;
    bool track_history = false;
};

void validate(const SolveConfig& cfg);

/// Outcome of a stationary iteration x <- T x + c. A single proper
/// splitting maps every vector into R(A^T) after one step, so the limit is
/// the least-squares minimum-norm solution pinv(A) b regardless of x0.
/// Multisplitting weights can push iterates out of R(A^T); the distance of
/// the final iterate from R(A^T) is reported separately rather than hidden.
struct IterationReport {
    Matrix solution;
    int iterations = 0;
    bool converged = false;
    double final_step = 0.0;
    double error_vs_pinv = 0.0;
    /// Geometric-mean contraction ratio over the last ten steps
    /// (step_K / step_{K-10})^(1/10); 0 when fewer than two steps ran.
    double rho_estimate = 0.0;
    double nullspace_component = 0.0;
    double normal_residual = 0.0;
    std::vector<double> history;
};

/// x^{i+1} = pinv(U) V x^i + pinv(U) b. x0 defaults to the zero vector.
IterationReport solve_single(const ProperSplitting& s, const Matrix& b,
                             const std::optional<Matrix>& x0 = std::nullopt,
                             const SolveConfig& solve_cfg = {}, const ToleranceConfig& cfg = {});

/// x_{i+1} = H x_i + G b with the cached multisplitting operators.
IterationReport solve_multi(const ProperMultisplitting& ms, const Matrix& b,
                            const std::optional<Matrix>& x0 = std::nullopt,
                            const SolveConfig& solve_cfg = {}, const ToleranceConfig& cfg = {});

/// Infinity norm of the normal-equation residual A^T (A x - b), the
/// least-squares stationarity certificate.
double residual(const Matrix& a, const Matrix& x, const Matrix& b);

}  // namespace propersplit
