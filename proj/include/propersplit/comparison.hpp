#pragma once

#include <optional>
#include <string>
#include <vector>

#include "propersplit/splitting.hpp"
#include "propersplit/tolerance.hpp"

namespace propersplit {

/// Closed set of comparison rules for stationary splitting iterations.
enum class TheoremId {
    CALCOLO_3,
    D4_I,
    D4_II,
    D4_III,
    MAIN2,
    MAIN5,
    MAIN6,
    MAIN7,
    MAIN8,
    MAIN9,
    NEG_PINV,
};

std::string to_string(TheoremId id);
std::optional<TheoremId> theorem_from_string(const std::string& name);
const std::vector<TheoremId>& all_theorems();

/// One hypothesis of a comparison rule. For flag hypotheses the residual
/// is 1/0; for entrywise orderings it is the worst-case signed margin, so
/// a negative value shows how badly the ordering fails.
struct HypothesisCheck {
    std::string name;
    bool satisfied = false;
    double residual = 0.0;
};

/// Outcome of checking one comparison rule on a concrete pair of
/// splittings. `theorem_id` carries the rule identifier (a TheoremId name,
/// or a multisplitting mode name). `applicable` means every hypothesis
/// held; `conclusion_holds` reports the numeric conclusion check
/// regardless of applicability, so counterexamples stay inspectable. When
/// `applicable` is true and the engine is sound, `conclusion_holds` must
/// be true; a false value there is a defect, not a user error. `alpha`
/// echoes the supplied or derived contraction factor when one exists.
struct ComparisonVerdict {
    std::string theorem_id;
    std::vector<HypothesisCheck> hypotheses_checked;
    bool applicable = false;
    bool conclusion_holds = false;
    double rho1 = 0.0;
    double rho2 = 0.0;
    bool strict = false;
    std::optional<double> alpha;
};

/// Rules that compare two splittings of the same matrix A:
/// CALCOLO_3, D4_I, D4_II, D4_III, MAIN6, MAIN7, MAIN8, MAIN9, NEG_PINV.
/// MAIN6/MAIN7/MAIN8 require alpha in (0, 1]; MAIN9 derives its own.
/// Throws MatrixMismatch when s1 and s2 do not share A and MissingAlpha
/// when a required alpha is absent.
ComparisonVerdict compare_same_A(const ProperSplitting& s1, const ProperSplitting& s2, TheoremId id,
                                 std::optional<double> alpha, const ToleranceConfig& cfg = {});

/// Rules that compare splittings of two different systems sharing shape:
/// MAIN2 (shared V) and MAIN5 (ordered V).
ComparisonVerdict compare_two_systems(const ProperSplitting& s1, const ProperSplitting& s2,
                                      TheoremId id, const ToleranceConfig& cfg = {});

/// Largest entry ratio alpha = max over pinv(U2) entries above sign_tol of
/// pinv(U2)_ij / pinv(U1)_ij, falling back to 0.5 when pinv(U2) has no
/// positive entry. Throws PreconditionFailed unless the result satisfies
/// 0 < alpha < 1 and pinv(U2) <= alpha * pinv(U1).
double find_alpha(const ProperSplitting& s1, const ProperSplitting& s2,
                  const ToleranceConfig& cfg = {});

}  // namespace propersplit
