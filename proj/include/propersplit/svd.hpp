#pragma once

#include <vector>

#include "propersplit/matrix.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

/// Full singular value decomposition a = left * diag(sigma) * right_t.
///
/// left is m x m orthogonal, right_t is n x n orthogonal, sigma holds
/// min(m, n) nonnegative values in descending order. rank counts the
/// sigma entries above tolerance, where
/// tolerance = rank_tol_factor * sigma_max * max(m, n).
struct SvdFactors {
    Matrix left;
    std::vector<double> sigma;
    Matrix right_t;
    int rank;
    double tolerance;
};

/// Computes the SVD by Householder bidiagonalization followed by
/// implicit-shift QR sweeps on the bidiagonal. Throws NonConvergence if
/// the sweep budget (75 per singular value) is exhausted.
SvdFactors svd(const Matrix& a, const ToleranceConfig& cfg = {});

}  // namespace propersplit
