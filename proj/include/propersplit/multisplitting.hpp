#pragma once

#include <optional>
#include <string>
#include <vector>

#include "propersplit/comparison.hpp"
#include "propersplit/matrix.hpp"
#include "propersplit/splitting.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

/// One member of a multisplitting: A = U - V weighted by a diagonal
/// nonnegative matrix E. V is derived as U - A.
struct MultisplittingPart {
    Matrix u;
    Matrix weight;
};

/// A family of proper splittings A = U_k - V_k with diagonal weights E_k >= 0
/// summing to the identity. Iterating with
///   H = sum_k E_k pinv(U_k) V_k,   G = sum_k E_k pinv(U_k)
/// drives x <- H x + G b. Parts are validated independently (possibly in
/// parallel, capped by PROPERSPLIT_THREADS); H and G are always accumulated
/// in ascending part order so results are reproducible bit for bit.
class ProperMultisplitting {
public:
    static ProperMultisplitting make(const Matrix& a, const std::vector<MultisplittingPart>& parts,
                                     const ToleranceConfig& cfg = {});

    const Matrix& a() const { return a_; }
    const Matrix& a_pinv() const { return splittings_[0].a_pinv(); }
    int size() const { return static_cast<int>(splittings_.size()); }
    const ProperSplitting& part(int k) const { return splittings_[static_cast<size_t>(k)]; }
    const Matrix& weight(int k) const { return weights_[static_cast<size_t>(k)]; }
    const Matrix& h() const { return h_; }
    const Matrix& g() const { return g_; }
    double rho() const { return rho_; }

private:
    ProperMultisplitting(Matrix a, std::vector<ProperSplitting> splittings,
                         std::vector<Matrix> weights, Matrix h, Matrix g, double rho);

    Matrix a_;
    std::vector<ProperSplitting> splittings_;
    std::vector<Matrix> weights_;
    Matrix h_;
    Matrix g_;
    double rho_;
};

ProperMultisplitting make_multisplitting(const Matrix& a, const std::vector<Matrix>& us,
                                         const std::vector<Matrix>& es,
                                         const ToleranceConfig& cfg = {});

/// Structural identities of a multisplitting whose parts are all weak
/// regular of type I: H >= 0, G A = (I - H) pinv(A) A, and the telescoped
/// partial sums sum_{i=0..m} H^i G A = (I - H^{m+1}) pinv(A) A for
/// m in {0, 1, 2, 5}. Throws PreconditionFailed when a part is not weak
/// regular of type I.
IdentityReport verify_perea_lemma(const ProperMultisplitting& ms, const ToleranceConfig& cfg = {});

/// The single proper splitting A = B - C induced by a multisplitting,
/// B = A (I - H)^{-1}.
struct InducedSplitting {
    Matrix b;
    Matrix c;
    ProperSplitting splitting;
    bool range_condition = false;
};

/// Computes the induced splitting, which satisfies pinv(B) = (I - H) pinv(A),
/// pinv(B) C = H and B (I - H) = A (uniqueness). Requires pinv(A) >= 0
/// (NotSemimonotone), the range condition pinv(A) A E_k = E_k for every k
/// (RangeConditionFailed), parts weak regular of type I (PreconditionFailed)
/// and rho(H) < 1 (Diverging). Postconditions are re-checked numerically;
/// violations raise SoundnessAlarm.
InducedSplitting induced_splitting(const ProperMultisplitting& ms, const ToleranceConfig& cfg = {});

/// Whether the induced splitting is proper regular. Only decided when
/// A >= 0 (the hypothesis that forces it); returns nullopt otherwise.
std::optional<bool> induced_is_regular(const ProperMultisplitting& ms,
                                       const ToleranceConfig& cfg = {});

/// Which per-part ordering a multisplitting comparison uses.
enum class MultiCompareMode {
    BY_V,      // V_k of the second family dominates the first, per part
    BY_UPINV,  // pinv(U_k) of the first family dominates the second, per part
};

std::string to_string(MultiCompareMode mode);

/// Compares rho(H_1) against rho(H_2) for two multisplittings of the same
/// matrix with identical weight families. The textbook hypothesis set asks
/// for A >= 0; with use_g_pinv_hypothesis it is replaced by the
/// experimental requirement pinv(G_i) >= 0. Throws MatrixMismatch or
/// WeightMismatch when the inputs are not comparable at all.
ComparisonVerdict compare_multisplittings(const ProperMultisplitting& m1,
                                          const ProperMultisplitting& m2, MultiCompareMode mode,
                                          bool use_g_pinv_hypothesis = false,
                                          const ToleranceConfig& cfg = {});

/// Sandwich of rho(H) between two extremal proper regular splittings whose
/// pinv(U) dominate (resp. are dominated by) every part's pinv(U_k).
struct ExtremalBoundsReport {
    std::vector<HypothesisCheck> hypotheses_checked;
    bool applicable = false;
    bool bounds_hold = false;
    double rho_lo = 0.0;
    double rho_multi = 0.0;
    double rho_hi = 0.0;
};

/// u_lo and u_hi must at least form proper splittings of ms.a() (NotProper
/// otherwise); every further requirement is reported as a hypothesis.
ExtremalBoundsReport extremal_bounds(const ProperMultisplitting& ms, const Matrix& u_lo,
                                     const Matrix& u_hi, const ToleranceConfig& cfg = {});

}  // namespace propersplit
