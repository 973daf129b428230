#include "propersplit/pinv.hpp"

#include <cmath>

#include "propersplit/svd.hpp"

namespace propersplit {

Matrix pinv(const Matrix& a, const ToleranceConfig& cfg) {
    const SvdFactors f = svd(a, cfg);
    const int m = a.rows();
    const int n = a.cols();
    Matrix x(n, m);
    for (int k = 0; k < static_cast<int>(f.sigma.size()); ++k) {
        const double s = f.sigma[static_cast<std::size_t>(k)];
        if (s <= f.tolerance) continue;
        const double inv = 1.0 / s;
        for (int i = 0; i < n; ++i) {
            const double vik = f.right_t(k, i);
            if (vik == 0.0) continue;
            for (int j = 0; j < m; ++j) x(i, j) += vik * inv * f.left(j, k);
        }
    }
    return x;
}

Matrix pinv_greville(const Matrix& a) {
    const int m = a.rows();
    const int n = a.cols();
    // pinv of the first column.
    Matrix acc(1, m);
    {
        double nrm2 = 0.0;
        for (int i = 0; i < m; ++i) nrm2 += a(i, 0) * a(i, 0);
        if (nrm2 > 0.0) {
            for (int i = 0; i < m; ++i) acc(0, i) = a(i, 0) / nrm2;
        }
    }
    for (int k = 1; k < n; ++k) {
        // Current block A_{k} = [A_{k-1} a_k] with acc = pinv(A_{k-1}).
        Matrix ak(m, 1);
        double ak_norm = 0.0;
        for (int i = 0; i < m; ++i) {
            ak(i, 0) = a(i, k);
            ak_norm += a(i, k) * a(i, k);
        }
        ak_norm = std::sqrt(ak_norm);
        Matrix d = acc * ak;  // k x 1
        // c = a_k - A_{k-1} d
        Matrix c(m, 1);
        for (int i = 0; i < m; ++i) {
            double t = ak(i, 0);
            for (int j = 0; j < k; ++j) t -= a(i, j) * d(j, 0);
            c(i, 0) = t;
        }
        double c_norm2 = 0.0;
        for (int i = 0; i < m; ++i) c_norm2 += c(i, 0) * c(i, 0);
        Matrix b(1, m);
        if (std::sqrt(c_norm2) > 1e-11 * (1.0 + ak_norm)) {
            for (int i = 0; i < m; ++i) b(0, i) = c(i, 0) / c_norm2;
        } else {
            double dtd = 0.0;
            for (int j = 0; j < k; ++j) dtd += d(j, 0) * d(j, 0);
            const double scale = 1.0 / (1.0 + dtd);
            Matrix dt_acc = d.transpose() * acc;  // 1 x m
            for (int i = 0; i < m; ++i) b(0, i) = scale * dt_acc(0, i);
        }
        Matrix next(k + 1, m);
        for (int r = 0; r < k; ++r)
            for (int i = 0; i < m; ++i) next(r, i) = acc(r, i) - d(r, 0) * b(0, i);
        for (int i = 0; i < m; ++i) next(k, i) = b(0, i);
        acc = next;
    }
    return acc;
}

}  // namespace propersplit
