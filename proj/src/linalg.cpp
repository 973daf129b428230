#include "propersplit/linalg.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "propersplit/eigen.hpp"
#include "propersplit/errors.hpp"
#include "propersplit/pinv.hpp"

namespace propersplit {

bool is_nonneg(const Matrix& a, const ToleranceConfig& cfg) {
    for (double v : a.data()) {
        if (v < -cfg.sign_tol) return false;
    }
    return true;
}

bool is_positive(const Matrix& a, const ToleranceConfig& cfg) {
    for (double v : a.data()) {
        if (v <= cfg.sign_tol) return false;
    }
    return true;
}

bool cmp_geq(const Matrix& a, const Matrix& b, const ToleranceConfig& cfg) {
    if (!a.same_shape(b)) throw DimensionMismatch("cmp_geq shape mismatch");
    return is_nonneg(a - b, cfg);
}

bool cmp_gt(const Matrix& a, const Matrix& b, const ToleranceConfig& cfg) {
    if (!a.same_shape(b)) throw DimensionMismatch("cmp_gt shape mismatch");
    return is_positive(a - b, cfg);
}

bool is_nonzero(const Matrix& a, const ToleranceConfig& cfg) {
    return a.max_abs() > cfg.sign_tol;
}

bool is_semipositive(const Matrix& a, const ToleranceConfig& cfg) {
    if (!is_nonneg(a, cfg)) return false;
    for (double v : a.data()) {
        if (v > cfg.sign_tol) return true;
    }
    return false;
}

bool is_irreducible(const Matrix& a, const ToleranceConfig& cfg) {
    if (a.rows() != a.cols()) throw DimensionMismatch("irreducibility requires a square matrix");
    const int n = a.rows();
    if (n == 1) return true;
    // Strong connectivity: every vertex reachable from 0 and 0 reachable
    // from every vertex (depth-first on the graph and its transpose).
    auto reach = [&](bool transpose) {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            const int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                const double w = transpose ? a(j, i) : a(i, j);
                if (!seen[static_cast<std::size_t>(j)] && std::fabs(w) > cfg.sign_tol) {
                    seen[static_cast<std::size_t>(j)] = 1;
                    stack.push_back(j);
                }
            }
        }
        return seen;
    };
    const auto fwd = reach(false);
    const auto bwd = reach(true);
    for (int i = 0; i < n; ++i) {
        if (!fwd[static_cast<std::size_t>(i)] || !bwd[static_cast<std::size_t>(i)]) return false;
    }
    return true;
}

Matrix neumann_inverse(const Matrix& x, const ToleranceConfig& cfg) {
    if (x.rows() != x.cols()) throw DimensionMismatch("neumann_inverse requires a square matrix");
    const double rho = spectral_radius(x, cfg);
    if (rho >= 1.0 - cfg.eig_tol) {
        throw Diverging("neumann series requires rho < 1, got rho = " + std::to_string(rho));
    }
    Matrix sum = Matrix::identity(x.rows());
    Matrix term = x;
    // Partial sums until the freshly added term is negligible. The term
    // budget guards pathological rho just below the cutoff.
    const int max_terms = 200000;
    for (int k = 1; k <= max_terms; ++k) {
        sum = sum + term;
        if (term.inf_norm() <= cfg.residual_tol) return sum;
        term = term * x;
    }
    throw NonConvergence("neumann series did not settle within its term budget");
}

namespace {

struct Lu {
    Matrix lu;
    std::vector<int> perm;
};

Lu lu_factor(const Matrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("LU factorization requires a square matrix");
    const int n = a.rows();
    Lu f{a, std::vector<int>(static_cast<std::size_t>(n))};
    for (int i = 0; i < n; ++i) f.perm[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::fabs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(f.lu(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) throw Diverging("LU factorization hit a zero pivot (singular matrix)");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[static_cast<std::size_t>(k)], f.perm[static_cast<std::size_t>(piv)]);
        }
        for (int i = k + 1; i < n; ++i) {
            f.lu(i, k) /= f.lu(k, k);
            const double lik = f.lu(i, k);
            if (lik == 0.0) continue;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= lik * f.lu(k, j);
        }
    }
    return f;
}

}  // namespace

Matrix lu_solve(const Matrix& a, const Matrix& rhs) {
    if (a.rows() != rhs.rows()) throw DimensionMismatch("lu_solve shape mismatch");
    const Lu f = lu_factor(a);
    const int n = a.rows();
    Matrix x(n, rhs.cols());
    for (int c = 0; c < rhs.cols(); ++c) {
        std::vector<double> y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double t = rhs(f.perm[static_cast<std::size_t>(i)], c);
            for (int j = 0; j < i; ++j) t -= f.lu(i, j) * y[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(i)] = t;
        }
        for (int i = n - 1; i >= 0; --i) {
            double t = y[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < n; ++j) t -= f.lu(i, j) * x(j, c);
            x(i, c) = t / f.lu(i, i);
        }
    }
    return x;
}

Matrix lu_inverse(const Matrix& a) { return lu_solve(a, Matrix::identity(a.rows())); }

bool same_range(const Matrix& a, const Matrix& u, const Matrix& a_pinv, const Matrix& u_pinv,
                const ToleranceConfig& cfg) {
    if (!a.same_shape(u)) throw DimensionMismatch("same_range shape mismatch");
    const double r1 = rel_residual(a * (a_pinv * u), u);
    const double r2 = rel_residual(u * (u_pinv * a), a);
    return r1 <= cfg.residual_tol && r2 <= cfg.residual_tol;
}

bool same_range(const Matrix& a, const Matrix& u, const ToleranceConfig& cfg) {
    return same_range(a, u, pinv(a, cfg), pinv(u, cfg), cfg);
}

bool same_nullspace(const Matrix& a, const Matrix& u, const Matrix& a_pinv, const Matrix& u_pinv,
                    const ToleranceConfig& cfg) {
    if (!a.same_shape(u)) throw DimensionMismatch("same_nullspace shape mismatch");
    const double r1 = rel_residual((u * a_pinv) * a, u);
    const double r2 = rel_residual((a * u_pinv) * u, a);
    return r1 <= cfg.residual_tol && r2 <= cfg.residual_tol;
}

bool same_nullspace(const Matrix& a, const Matrix& u, const ToleranceConfig& cfg) {
    return same_nullspace(a, u, pinv(a, cfg), pinv(u, cfg), cfg);
}

}  // namespace propersplit
