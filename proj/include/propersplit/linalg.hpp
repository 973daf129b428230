#pragma once

#include "propersplit/matrix.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

/// True when every entry is >= -sign_tol.
bool is_nonneg(const Matrix& a, const ToleranceConfig& cfg = {});

/// True when every entry is > sign_tol.
bool is_positive(const Matrix& a, const ToleranceConfig& cfg = {});

/// Entrywise a >= b with sign_tol slack.
bool cmp_geq(const Matrix& a, const Matrix& b, const ToleranceConfig& cfg = {});

/// Entrywise a > b, every difference above sign_tol.
bool cmp_gt(const Matrix& a, const Matrix& b, const ToleranceConfig& cfg = {});

/// True when some entry exceeds sign_tol in absolute value.
bool is_nonzero(const Matrix& a, const ToleranceConfig& cfg = {});

/// a >= 0 with at least one entry above sign_tol (the semi-positive order).
bool is_semipositive(const Matrix& a, const ToleranceConfig& cfg = {});

/// Strong connectivity of the directed graph with an edge i -> j whenever
/// |a_ij| > sign_tol. A 1 x 1 matrix is irreducible by convention (it has
/// no nonvoid proper index subset).
bool is_irreducible(const Matrix& a, const ToleranceConfig& cfg = {});

/// Partial sums of I + x + x^2 + ... until the last term has infinity
/// norm <= residual_tol. Throws Diverging when rho(x) >= 1 - eig_tol.
Matrix neumann_inverse(const Matrix& x, const ToleranceConfig& cfg = {});

/// Column-pivoted LU solve of a * x = rhs (multiple right-hand sides).
Matrix lu_solve(const Matrix& a, const Matrix& rhs);

/// Inverse via LU with partial pivoting.
Matrix lu_inverse(const Matrix& a);

/// R(a) == R(u), tested through the orthogonal projector identities
/// a a^+ u = u and u u^+ a = a.
bool same_range(const Matrix& a, const Matrix& u, const Matrix& a_pinv, const Matrix& u_pinv,
                const ToleranceConfig& cfg = {});
bool same_range(const Matrix& a, const Matrix& u, const ToleranceConfig& cfg = {});

/// N(a) == N(u), tested through u a^+ a = u and a u^+ u = a.
bool same_nullspace(const Matrix& a, const Matrix& u, const Matrix& a_pinv, const Matrix& u_pinv,
                    const ToleranceConfig& cfg = {});
bool same_nullspace(const Matrix& a, const Matrix& u, const ToleranceConfig& cfg = {});

}  // namespace propersplit
