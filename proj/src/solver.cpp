#include "propersplit/solver.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "propersplit/errors.hpp"

namespace propersplit {

namespace {

// Step norms above this are treated as divergence and stop the iteration.
constexpr double kDivergenceCap = 1e12;

void require_rhs(const Matrix& a, const Matrix& b) {
    b.check_finite();
    if (b.cols() != 1 || b.rows() != a.rows()) {
        throw DimensionMismatch("right-hand side must be a " + std::to_string(a.rows()) +
                                "x1 column");
    }
}

Matrix start_vector(const std::optional<Matrix>& x0, int n) {
    if (!x0.has_value()) return Matrix(n, 1);
    x0->check_finite();
    if (x0->cols() != 1 || x0->rows() != n) {
        throw DimensionMismatch("initial vector must be a " + std::to_string(n) + "x1 column");
    }
    return *x0;
}

double estimate_rho(const std::vector<double>& steps) {
    const int count = static_cast<int>(steps.size());
    if (count < 2) return 0.0;
    int window = std::min(10, count - 1);
    double tail = steps[static_cast<size_t>(count - 1)];
    double head = steps[static_cast<size_t>(count - 1 - window)];
    if (!(head > 0.0) || !(tail > 0.0)) return 0.0;
    return std::pow(tail / head, 1.0 / window);
}

// Single code path for both solvers so that a one-part multisplitting with
// identity weight reproduces solve_single bit for bit.
IterationReport iterate(const Matrix& t, const Matrix& c, const Matrix& a, const Matrix& a_pinv,
                        const Matrix& b, Matrix x, const SolveConfig& cfg) {
    std::vector<double> steps;
    steps.reserve(static_cast<size_t>(cfg.max_iters));

    int iterations = 0;
    bool converged = false;
    double final_step = 0.0;
    for (;;) {
        Matrix x_next = t * x + c;
        double step = (x_next - x).inf_norm();
        steps.push_back(step);
        final_step = step;
        bool blown = !std::isfinite(step) || step > kDivergenceCap;
        if (!blown && step <= cfg.step_tol) {
            // The current iterate is already a fixed point of the map to
            // within step_tol, so keep it instead of advancing once more.
            converged = true;
            break;
        }
        x = std::move(x_next);
        ++iterations;
        if (blown || iterations >= cfg.max_iters) break;
    }

    double rho_estimate = estimate_rho(steps);
    double error_vs_pinv = (x - a_pinv * b).inf_norm();
    double nullspace_component = (x - (a_pinv * a) * x).inf_norm();
    double normal_residual = residual(a, x, b);
    std::vector<double> history;
    if (cfg.track_history) history = std::move(steps);
    return IterationReport{std::move(x),   iterations,          converged,
                           final_step,     error_vs_pinv,       rho_estimate,
                           nullspace_component, normal_residual, std::move(history)};
}

}  // namespace

void validate(const SolveConfig& cfg) {
    if (cfg.max_iters < 1) throw PreconditionFailed("solver config: max_iters must be positive");
    if (!(cfg.step_tol > 0.0)) throw PreconditionFailed("solver config: step_tol must be positive");
}

IterationReport solve_single(const ProperSplitting& s, const Matrix& b,
                             const std::optional<Matrix>& x0, const SolveConfig& solve_cfg,
                             const ToleranceConfig& cfg) {
    validate(cfg);
    validate(solve_cfg);
    require_rhs(s.a(), b);
    Matrix x = start_vector(x0, s.a().cols());
    Matrix c = s.u_pinv() * b;
    return iterate(s.iter_matrix(), c, s.a(), s.a_pinv(), b, std::move(x), solve_cfg);
}

IterationReport solve_multi(const ProperMultisplitting& ms, const Matrix& b,
                            const std::optional<Matrix>& x0, const SolveConfig& solve_cfg,
                            const ToleranceConfig& cfg) {
    validate(cfg);
    validate(solve_cfg);
    require_rhs(ms.a(), b);
    Matrix x = start_vector(x0, ms.a().cols());
    Matrix c = ms.g() * b;
    return iterate(ms.h(), c, ms.a(), ms.a_pinv(), b, std::move(x), solve_cfg);
}

double residual(const Matrix& a, const Matrix& x, const Matrix& b) {
    if (x.cols() != 1 || b.cols() != 1 || x.rows() != a.cols() || b.rows() != a.rows()) {
        throw DimensionMismatch("residual: x must be n x 1 and b must be m x 1");
    }
    return (a.transpose() * (a * x - b)).inf_norm();
}

}  // namespace propersplit
