#pragma once

#include "propersplit/matrix.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

/// Moore-Penrose pseudoinverse via SVD, inverting singular values above
/// the rank cutoff.
Matrix pinv(const Matrix& a, const ToleranceConfig& cfg = {});

/// Column-recursive Greville pseudoinverse. Kept as an independent
/// reference path for the SVD route; total (never throws on valid input)
/// and accurate on well-conditioned matrices.
Matrix pinv_greville(const Matrix& a);

}  // namespace propersplit
