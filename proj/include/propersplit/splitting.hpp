#pragma once

#include <string>
#include <vector>

#include "propersplit/eigen.hpp"
#include "propersplit/matrix.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

/// A = U - V with R(U) = R(A) and N(U) = N(A), validated at construction.
/// Caches pinv(U), pinv(A), the iteration matrix U^+ V and its transposed
/// companion V U^+, plus the spectral radius of the iteration (computed on
/// the smaller of the two products; both share the nonzero spectrum).
class ProperSplitting {
public:
    static ProperSplitting make(const Matrix& a, const Matrix& u, const ToleranceConfig& cfg = {});

    const Matrix& a() const { return a_; }
    const Matrix& u() const { return u_; }
    const Matrix& v() const { return v_; }
    const Matrix& u_pinv() const { return u_pinv_; }
    const Matrix& a_pinv() const { return a_pinv_; }
    /// U^+ V, the n x n iteration matrix.
    const Matrix& iter_matrix() const { return iter_; }
    /// V U^+, the m x m companion used by the type II predicates.
    const Matrix& iter_matrix_t2() const { return iter_t2_; }
    double rho() const { return rho_; }

private:
    ProperSplitting(Matrix a, Matrix u, Matrix v, Matrix u_pinv, Matrix a_pinv, Matrix iter,
                    Matrix iter_t2, double rho);

    Matrix a_;
    Matrix u_;
    Matrix v_;
    Matrix u_pinv_;
    Matrix a_pinv_;
    Matrix iter_;
    Matrix iter_t2_;
    double rho_;
};

ProperSplitting make_splitting(const Matrix& a, const Matrix& u, const ToleranceConfig& cfg = {});

/// Mechanical classification of a validated splitting.
struct SplittingClassification {
    bool proper = true;
    bool proper_regular = false;
    bool weak_regular_I = false;
    bool weak_regular_II = false;
    bool nonnegative_I = false;
    bool nonnegative_II = false;
    double rho = 0.0;
    bool convergent = false;
};

SplittingClassification classify(const ProperSplitting& s, const ToleranceConfig& cfg = {});

struct IdentityCheck {
    std::string name;
    double residual = 0.0;
    bool pass = false;
};

struct IdentityReport {
    std::vector<IdentityCheck> checks;
    bool all_pass = false;
};

/// Residuals of the structural identities every proper splitting obeys:
/// A = U (I - U^+ V), invertibility of I - U^+ V, pinv(A) = (I - U^+ V)^{-1} U^+,
/// A = (I - V U^+) U and pinv(A) = U^+ (I - V U^+)^{-1}.
IdentityReport verify_splitting_identities(const ProperSplitting& s, const ToleranceConfig& cfg = {});

struct EigenPairMatch {
    Eigenvalue value;
    Eigenvalue mapped;
    double distance = 0.0;
    bool matched = false;
};

struct CorrespondenceReport {
    /// Every eigenvalue lambda of pinv(A) V against mu/(1-mu) over mu in spec(U^+ V).
    std::vector<EigenPairMatch> forward;
    /// Every eigenvalue mu of U^+ V against lambda/(1+lambda) over lambda in spec(pinv(A) V).
    std::vector<EigenPairMatch> backward;
    bool all_matched = false;
};

CorrespondenceReport eigen_correspondence(const ProperSplitting& s, const ToleranceConfig& cfg = {});

/// Spectral radius through the ratio formula rho = r / (1 + r) with
/// r = rho(pinv(A) V) when pinv(A) V >= 0, or r = rho(V pinv(A)) when
/// V pinv(A) >= 0. Throws PreconditionFailed when neither product is
/// nonnegative and SoundnessAlarm if the result disagrees with the cached
/// spectral radius beyond 1e-8.
double rho_via_ratio(const ProperSplitting& s, const ToleranceConfig& cfg = {});

/// Perron-style convergence certificate for a weak regular type II
/// splitting of a semimonotone matrix: a vector x >= 0, x != 0, with
/// U^+ V x = rho x, A x >= 0 and V x >= 0.
struct PerronWitness {
    Matrix x;
    double rho = 0.0;
    Matrix ax;
    Matrix vx;
};

PerronWitness perron_witness(const ProperSplitting& s, const ToleranceConfig& cfg = {});

}  // namespace propersplit
