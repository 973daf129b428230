#include "propersplit/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "propersplit/errors.hpp"

namespace propersplit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Rotation {
    double c;
    double s;
};

// Rotation with c*a + s*b = r and -s*a + c*b = 0.
Rotation make_rotation(double a, double b) {
    const double r = std::hypot(a, b);
    if (r == 0.0) return {1.0, 0.0};
    return {a / r, b / r};
}

// B <- B * G acting on columns (j, k): col_j' = c*col_j + s*col_k.
void rotate_cols(Matrix& m, int j, int k, Rotation g) {
    for (int i = 0; i < m.rows(); ++i) {
        const double a = m(i, j);
        const double b = m(i, k);
        m(i, j) = g.c * a + g.s * b;
        m(i, k) = -g.s * a + g.c * b;
    }
}

// B <- G^T * B acting on rows (j, k): row_j' = c*row_j + s*row_k.
void rotate_rows(Matrix& m, int j, int k, Rotation g) {
    for (int i = 0; i < m.cols(); ++i) {
        const double a = m(j, i);
        const double b = m(k, i);
        m(j, i) = g.c * a + g.s * b;
        m(k, i) = -g.s * a + g.c * b;
    }
}

struct Householder {
    std::vector<double> v;
    double beta = 0.0;
};

// Reflector for x = column[from..to) such that H*x lands on a multiple of e_from.
Householder make_householder(const std::vector<double>& x) {
    Householder h;
    h.v = x;
    double norm = 0.0;
    for (double t : x) norm += t * t;
    norm = std::sqrt(norm);
    if (norm == 0.0) return h;
    const double alpha = x[0] >= 0.0 ? -norm : norm;
    h.v[0] -= alpha;
    double vtv = 0.0;
    for (double t : h.v) vtv += t * t;
    if (vtv == 0.0) return h;
    h.beta = 2.0 / vtv;
    return h;
}

// Wilkinson shift from the trailing 2x2 of B^T B restricted to [lo..hi].
double gk_shift(const Matrix& b, int lo, int hi) {
    const double dm = b(hi - 1, hi - 1);
    const double dq = b(hi, hi);
    const double em = (hi - 1 > lo) ? b(hi - 2, hi - 1) : 0.0;
    const double eq = b(hi - 1, hi);
    const double t11 = dm * dm + em * em;
    const double t12 = dm * eq;
    const double t22 = dq * dq + eq * eq;
    const double delta = 0.5 * (t11 - t22);
    const double denom = delta + std::copysign(std::hypot(delta, t12), delta == 0.0 ? 1.0 : delta);
    if (denom == 0.0) return t22;
    return t22 - (t12 * t12) / denom;
}

// One implicit-shift QR sweep on the bidiagonal block [lo..hi] of bd,
// accumulating the rotations into u (right-applied) and vt (left-applied).
void gk_step(Matrix& bd, Matrix& u, Matrix& vt, int lo, int hi) {
    const double mu = gk_shift(bd, lo, hi);
    double y = bd(lo, lo) * bd(lo, lo) - mu;
    double z = bd(lo, lo) * bd(lo, lo + 1);
    for (int k = lo; k < hi; ++k) {
        Rotation right = (k == lo) ? make_rotation(y, z)
                                   : make_rotation(bd(k - 1, k), bd(k - 1, k + 1));
        rotate_cols(bd, k, k + 1, right);
        rotate_rows(vt, k, k + 1, right);
        if (k > lo) bd(k - 1, k + 1) = 0.0;
        Rotation left = make_rotation(bd(k, k), bd(k + 1, k));
        rotate_rows(bd, k, k + 1, left);
        rotate_cols(u, k, k + 1, left);
        bd(k + 1, k) = 0.0;
    }
}

// Chase a zero diagonal entry at row i (i < hi) off the end of the block:
// left rotations in planes (i, j) annihilate row i entirely.
void chase_zero_row(Matrix& bd, Matrix& u, int i, int hi) {
    for (int j = i + 1; j <= hi; ++j) {
        const double a = bd(j, j);
        const double b = bd(i, j);
        const Rotation g = make_rotation(a, b);
        // rows (j, i): row_j' = c*row_j + s*row_i kills (i, j)
        rotate_rows(bd, j, i, g);
        rotate_cols(u, j, i, g);
        bd(i, j) = 0.0;
    }
    bd(i, i) = 0.0;
}

// Chase a zero diagonal entry at the block end hi: right rotations in
// planes (j, hi) annihilate column hi.
void chase_zero_col(Matrix& bd, Matrix& vt, int lo, int hi) {
    for (int j = hi - 1; j >= lo; --j) {
        const double a = bd(j, j);
        const double b = bd(j, hi);
        const Rotation g = make_rotation(a, b);
        rotate_cols(bd, j, hi, g);
        rotate_rows(vt, j, hi, g);
        bd(j, hi) = 0.0;
    }
    bd(hi, hi) = 0.0;
}

SvdFactors svd_tall(const Matrix& a, const ToleranceConfig& cfg) {
    const int m = a.rows();
    const int n = a.cols();
    Matrix bd = a;
    Matrix u = Matrix::identity(m);
    Matrix vt = Matrix::identity(n);

    // Householder bidiagonalization: A = U * B * V^T with B upper bidiagonal.
    for (int k = 0; k < n; ++k) {
        std::vector<double> col(static_cast<std::size_t>(m - k));
        for (int i = k; i < m; ++i) col[static_cast<std::size_t>(i - k)] = bd(i, k);
        Householder hl = make_householder(col);
        if (hl.beta != 0.0) {
            for (int j = k; j < n; ++j) {
                double w = 0.0;
                for (int i = k; i < m; ++i) w += hl.v[static_cast<std::size_t>(i - k)] * bd(i, j);
                w *= hl.beta;
                for (int i = k; i < m; ++i) bd(i, j) -= w * hl.v[static_cast<std::size_t>(i - k)];
            }
            for (int r = 0; r < m; ++r) {
                double w = 0.0;
                for (int i = k; i < m; ++i) w += u(r, i) * hl.v[static_cast<std::size_t>(i - k)];
                w *= hl.beta;
                for (int i = k; i < m; ++i) u(r, i) -= w * hl.v[static_cast<std::size_t>(i - k)];
            }
        }
        for (int i = k + 1; i < m; ++i) bd(i, k) = 0.0;
        if (k <= n - 3) {
            std::vector<double> row(static_cast<std::size_t>(n - k - 1));
            for (int j = k + 1; j < n; ++j) row[static_cast<std::size_t>(j - k - 1)] = bd(k, j);
            Householder hr = make_householder(row);
            if (hr.beta != 0.0) {
                for (int i = k; i < m; ++i) {
                    double w = 0.0;
                    for (int j = k + 1; j < n; ++j) w += bd(i, j) * hr.v[static_cast<std::size_t>(j - k - 1)];
                    w *= hr.beta;
                    for (int j = k + 1; j < n; ++j) bd(i, j) -= w * hr.v[static_cast<std::size_t>(j - k - 1)];
                }
                for (int c = 0; c < n; ++c) {
                    double w = 0.0;
                    for (int j = k + 1; j < n; ++j) w += hr.v[static_cast<std::size_t>(j - k - 1)] * vt(j, c);
                    w *= hr.beta;
                    for (int j = k + 1; j < n; ++j) vt(j, c) -= w * hr.v[static_cast<std::size_t>(j - k - 1)];
                }
            }
            for (int j = k + 2; j < n; ++j) bd(k, j) = 0.0;
        }
    }

    const double bnorm = std::max(bd.frobenius_norm(), kEps);
    const int budget = 75 * n;
    int sweeps = 0;

    while (true) {
        for (int i = 0; i + 1 < n; ++i) {
            const double thresh =
                8.0 * kEps * (std::fabs(bd(i, i)) + std::fabs(bd(i + 1, i + 1))) + kEps * bnorm * 1e-3;
            if (std::fabs(bd(i, i + 1)) <= thresh) bd(i, i + 1) = 0.0;
        }
        int hi = -1;
        for (int i = n - 2; i >= 0; --i) {
            if (bd(i, i + 1) != 0.0) {
                hi = i + 1;
                break;
            }
        }
        if (hi < 0) break;
        int lo = hi - 1;
        while (lo > 0 && bd(lo - 1, lo) != 0.0) --lo;

        int zero_row = -1;
        for (int i = lo; i < hi; ++i) {
            if (std::fabs(bd(i, i)) <= 8.0 * kEps * bnorm) {
                zero_row = i;
                break;
            }
        }
        if (zero_row >= 0) {
            chase_zero_row(bd, u, zero_row, hi);
            continue;
        }
        if (std::fabs(bd(hi, hi)) <= 8.0 * kEps * bnorm) {
            chase_zero_col(bd, vt, lo, hi);
            continue;
        }
        gk_step(bd, u, vt, lo, hi);
        if (++sweeps > budget) {
            throw NonConvergence("svd sweep budget exhausted after " + std::to_string(sweeps) +
                                 " implicit-shift steps");
        }
    }

    // Sign fixes and descending sort.
    std::vector<double> sigma(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double d = bd(i, i);
        if (d < 0.0) {
            d = -d;
            for (int c = 0; c < n; ++c) vt(i, c) = -vt(i, c);
        }
        sigma[static_cast<std::size_t>(i)] = d;
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return sigma[static_cast<std::size_t>(x)] > sigma[static_cast<std::size_t>(y)];
    });
    SvdFactors out{Matrix(m, m), std::vector<double>(static_cast<std::size_t>(n)), Matrix(n, n), 0, 0.0};
    out.left = u;
    for (int j = 0; j < n; ++j) {
        const int src = order[static_cast<std::size_t>(j)];
        out.sigma[static_cast<std::size_t>(j)] = sigma[static_cast<std::size_t>(src)];
        for (int i = 0; i < m; ++i) out.left(i, j) = u(i, src);
        for (int c = 0; c < n; ++c) out.right_t(j, c) = vt(src, c);
    }
    const double smax = out.sigma.empty() ? 0.0 : out.sigma.front();
    out.tolerance = cfg.rank_tol_factor * smax * std::max(m, n);
    if (out.tolerance <= 0.0) out.tolerance = cfg.rank_tol_factor;
    for (double s : out.sigma) {
        if (s > out.tolerance) ++out.rank;
    }
    return out;
}

}  // namespace

SvdFactors svd(const Matrix& a, const ToleranceConfig& cfg) {
    if (a.rows() >= a.cols()) return svd_tall(a, cfg);
    SvdFactors t = svd_tall(a.transpose(), cfg);
    SvdFactors out{t.right_t.transpose(), std::move(t.sigma), t.left.transpose(), t.rank, t.tolerance};
    return out;
}

}  // namespace propersplit
