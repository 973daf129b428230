#include "propersplit/multisplitting.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include "propersplit/eigen.hpp"
#include "propersplit/errors.hpp"
#include "propersplit/linalg.hpp"
#include "propersplit/pinv.hpp"

namespace propersplit {

namespace {

constexpr double kGapTol = 1e-9;   // slack on concluded rho inequalities
constexpr double kPostTol = 1e-8;  // induced-splitting postcondition residuals

int thread_budget() {
    if (const char* env = std::getenv("PROPERSPLIT_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void require_weight(const Matrix& e, int n, int k, const ToleranceConfig& cfg) {
    if (e.rows() != n || e.cols() != n) {
        throw BadWeights("weight " + std::to_string(k) + " is not " + std::to_string(n) + "x" +
                         std::to_string(n));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (std::abs(e(i, j)) > cfg.sign_tol) {
                throw BadWeights("weight " + std::to_string(k) + " is not diagonal");
            }
        }
        if (e(i, i) < -cfg.sign_tol) {
            throw BadWeights("weight " + std::to_string(k) + " has a negative diagonal entry");
        }
    }
}

void push(std::vector<HypothesisCheck>& hs, std::string name, bool ok, double margin) {
    hs.push_back(HypothesisCheck{std::move(name), ok, margin});
}

void check_flag(std::vector<HypothesisCheck>& hs, std::string name, bool ok) {
    push(hs, std::move(name), ok, ok ? 1.0 : 0.0);
}

void check_nonneg(std::vector<HypothesisCheck>& hs, std::string name, const Matrix& m,
                  const ToleranceConfig& cfg) {
    push(hs, std::move(name), is_nonneg(m, cfg), m.min_entry());
}

double min_row_sum(const Matrix& m) {
    double lo = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < m.cols(); ++j) s += m(i, j);
        lo = std::min(lo, s);
    }
    return lo;
}

double range_condition_residual(const ProperMultisplitting& ms, const ToleranceConfig& cfg,
                                int* worst_k) {
    Matrix proj = ms.a_pinv() * ms.a();
    double worst = 0.0;
    if (worst_k) *worst_k = 0;
    for (int k = 0; k < ms.size(); ++k) {
        double res = rel_residual(proj * ms.weight(k), ms.weight(k));
        if (res > worst) {
            worst = res;
            if (worst_k) *worst_k = k;
        }
    }
    (void)cfg;
    return worst;
}

bool all_parts_weak_regular_I(const ProperMultisplitting& ms, const ToleranceConfig& cfg) {
    for (int k = 0; k < ms.size(); ++k) {
        if (!classify(ms.part(k), cfg).weak_regular_I) return false;
    }
    return true;
}

}  // namespace

ProperMultisplitting::ProperMultisplitting(Matrix a, std::vector<ProperSplitting> splittings,
                                           std::vector<Matrix> weights, Matrix h, Matrix g,
                                           double rho)
    : a_(std::move(a)),
      splittings_(std::move(splittings)),
      weights_(std::move(weights)),
      h_(std::move(h)),
      g_(std::move(g)),
      rho_(rho) {}

ProperMultisplitting ProperMultisplitting::make(const Matrix& a,
                                                const std::vector<MultisplittingPart>& parts,
                                                const ToleranceConfig& cfg) {
    validate(cfg);
    a.check_finite();
    if (parts.empty()) throw BadWeights("a multisplitting needs at least one part");
    const int m = a.rows();
    const int n = a.cols();
    const int p = static_cast<int>(parts.size());

    Matrix weight_sum(n, n);
    for (int k = 0; k < p; ++k) {
        require_weight(parts[static_cast<size_t>(k)].weight, n, k, cfg);
        weight_sum = weight_sum + parts[static_cast<size_t>(k)].weight;
    }
    if ((weight_sum - Matrix::identity(n)).max_abs() > cfg.sign_tol) {
        throw BadWeights("weights do not sum to the identity");
    }

    std::vector<std::optional<ProperSplitting>> built(static_cast<size_t>(p));
    std::vector<std::exception_ptr> failures(static_cast<size_t>(p));
    const int budget = std::min(thread_budget(), p);
    if (budget <= 1) {
        for (int k = 0; k < p; ++k) {
            try {
                built[static_cast<size_t>(k)].emplace(
                    ProperSplitting::make(a, parts[static_cast<size_t>(k)].u, cfg));
            } catch (...) {
                failures[static_cast<size_t>(k)] = std::current_exception();
            }
        }
    } else {
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (;;) {
                int k = next.fetch_add(1);
                if (k >= p) return;
                try {
                    built[static_cast<size_t>(k)].emplace(
                        ProperSplitting::make(a, parts[static_cast<size_t>(k)].u, cfg));
                } catch (...) {
                    failures[static_cast<size_t>(k)] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(budget));
        for (int t = 0; t < budget; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    for (int k = 0; k < p; ++k) {
        if (!failures[static_cast<size_t>(k)]) continue;
        try {
            std::rethrow_exception(failures[static_cast<size_t>(k)]);
        } catch (const NotProper& e) {
            throw NotProper("part " + std::to_string(k) + ": " + e.what(), e.range_residual,
                            e.nullspace_residual, k);
        }
    }

    std::vector<ProperSplitting> splittings;
    splittings.reserve(static_cast<size_t>(p));
    std::vector<Matrix> weights;
    weights.reserve(static_cast<size_t>(p));
    Matrix h(n, n);
    Matrix g(n, m);
    for (int k = 0; k < p; ++k) {
        const ProperSplitting& s = *built[static_cast<size_t>(k)];
        const Matrix& e = parts[static_cast<size_t>(k)].weight;
        h = h + e * s.iter_matrix();
        g = g + e * s.u_pinv();
        splittings.push_back(s);
        weights.push_back(e);
    }
    double rho = spectral_radius(h, cfg);
    return ProperMultisplitting(a, std::move(splittings), std::move(weights), std::move(h),
                                std::move(g), rho);
}

ProperMultisplitting make_multisplitting(const Matrix& a, const std::vector<Matrix>& us,
                                         const std::vector<Matrix>& es,
                                         const ToleranceConfig& cfg) {
    if (us.size() != es.size()) {
        throw BadWeights("make_multisplitting: " + std::to_string(us.size()) +
                         " splitting matrices but " + std::to_string(es.size()) + " weights");
    }
    std::vector<MultisplittingPart> parts;
    parts.reserve(us.size());
    for (size_t k = 0; k < us.size(); ++k) parts.push_back(MultisplittingPart{us[k], es[k]});
    return ProperMultisplitting::make(a, parts, cfg);
}

IdentityReport verify_perea_lemma(const ProperMultisplitting& ms, const ToleranceConfig& cfg) {
    validate(cfg);
    for (int k = 0; k < ms.size(); ++k) {
        if (!classify(ms.part(k), cfg).weak_regular_I) {
            throw PreconditionFailed("part " + std::to_string(k) +
                                     " is not weak regular of type I");
        }
    }
    const int n = ms.a().cols();
    IdentityReport report;
    auto add = [&report, &cfg](std::string name, double residual) {
        report.checks.push_back(
            IdentityCheck{std::move(name), residual, residual <= cfg.residual_tol});
    };

    report.checks.push_back(IdentityCheck{"h_nonneg", std::max(0.0, -ms.h().min_entry()),
                                          is_nonneg(ms.h(), cfg)});

    Matrix ga = ms.g() * ms.a();
    Matrix proj = ms.a_pinv() * ms.a();
    add("weighted_parts_sum", rel_residual(ga, (Matrix::identity(n) - ms.h()) * proj));

    Matrix hpow = Matrix::identity(n);
    Matrix sum(n, n);
    for (int i = 0; i <= 5; ++i) {
        sum = sum + hpow * ga;
        hpow = ms.h() * hpow;
        if (i == 0 || i == 1 || i == 2 || i == 5) {
            add("telescoping_m" + std::to_string(i),
                rel_residual(sum, (Matrix::identity(n) - hpow) * proj));
        }
    }

    report.all_pass = std::all_of(report.checks.begin(), report.checks.end(),
                                  [](const IdentityCheck& c) { return c.pass; });
    return report;
}

InducedSplitting induced_splitting(const ProperMultisplitting& ms, const ToleranceConfig& cfg) {
    validate(cfg);
    const Matrix& apinv = ms.a_pinv();
    if (!is_nonneg(apinv, cfg)) {
        throw NotSemimonotone("induced splitting requires pinv(A) >= 0");
    }
    Matrix proj = apinv * ms.a();
    for (int k = 0; k < ms.size(); ++k) {
        double res = rel_residual(proj * ms.weight(k), ms.weight(k));
        if (res > cfg.residual_tol) {
            throw RangeConditionFailed("pinv(A) A E_" + std::to_string(k) + " != E_" +
                                           std::to_string(k) + ", residual " + std::to_string(res),
                                       k, res);
        }
    }
    for (int k = 0; k < ms.size(); ++k) {
        if (!classify(ms.part(k), cfg).weak_regular_I) {
            throw PreconditionFailed("part " + std::to_string(k) +
                                     " is not weak regular of type I");
        }
    }
    if (ms.rho() >= 1.0 - cfg.eig_tol) {
        throw Diverging("rho(H) = " + std::to_string(ms.rho()) + " is not below one");
    }

    const int n = ms.a().cols();
    Matrix i_minus_h = Matrix::identity(n) - ms.h();
    Matrix b = ms.a() * lu_inverse(i_minus_h);
    ProperSplitting induced = [&]() {
        try {
            return ProperSplitting::make(ms.a(), b, cfg);
        } catch (const NotProper& e) {
            throw SoundnessAlarm(std::string("induced splitting is not proper: ") + e.what());
        }
    }();

    double unique_res = rel_residual(b * i_minus_h, ms.a());
    if (unique_res > kPostTol) {
        throw SoundnessAlarm("induced splitting violates B (I - H) = A, residual " +
                             std::to_string(unique_res));
    }
    double pinv_res = rel_residual(induced.u_pinv(), i_minus_h * apinv);
    if (pinv_res > kPostTol) {
        throw SoundnessAlarm("induced splitting violates pinv(B) = (I - H) pinv(A), residual " +
                             std::to_string(pinv_res));
    }
    double iter_res = rel_residual(induced.iter_matrix(), ms.h());
    if (iter_res > kPostTol) {
        throw SoundnessAlarm("induced splitting violates pinv(B) C = H, residual " +
                             std::to_string(iter_res));
    }
    if (!classify(induced, cfg).weak_regular_I) {
        throw SoundnessAlarm("induced splitting is not weak regular of type I");
    }
    Matrix c = induced.v();
    return InducedSplitting{std::move(b), std::move(c), std::move(induced), true};
}

std::optional<bool> induced_is_regular(const ProperMultisplitting& ms, const ToleranceConfig& cfg) {
    validate(cfg);
    if (!is_nonneg(ms.a(), cfg)) return std::nullopt;
    InducedSplitting induced = induced_splitting(ms, cfg);
    return classify(induced.splitting, cfg).proper_regular;
}

std::string to_string(MultiCompareMode mode) {
    return mode == MultiCompareMode::BY_V ? "MULTI_BY_V" : "MULTI_BY_UPINV";
}

ComparisonVerdict compare_multisplittings(const ProperMultisplitting& m1,
                                          const ProperMultisplitting& m2, MultiCompareMode mode,
                                          bool use_g_pinv_hypothesis, const ToleranceConfig& cfg) {
    validate(cfg);
    if (!m1.a().equal_entries(m2.a())) {
        throw MatrixMismatch("compare_multisplittings: the families split different matrices");
    }
    if (m1.size() != m2.size()) {
        throw WeightMismatch("compare_multisplittings: part counts differ");
    }
    for (int k = 0; k < m1.size(); ++k) {
        if ((m1.weight(k) - m2.weight(k)).max_abs() > cfg.sign_tol) {
            throw WeightMismatch("compare_multisplittings: weight " + std::to_string(k) +
                                 " differs");
        }
    }

    ComparisonVerdict v;
    v.theorem_id = to_string(mode);
    auto& hs = v.hypotheses_checked;

    if (use_g_pinv_hypothesis) {
        check_nonneg(hs, "pinv_g1_nonneg", pinv(m1.g(), cfg), cfg);
        check_nonneg(hs, "pinv_g2_nonneg", pinv(m2.g(), cfg), cfg);
    } else {
        check_nonneg(hs, "a_nonneg", m1.a(), cfg);
    }
    check_nonneg(hs, "pinv_a_nonneg", m1.a_pinv(), cfg);

    int worst1 = 0, worst2 = 0;
    double res1 = range_condition_residual(m1, cfg, &worst1);
    double res2 = range_condition_residual(m2, cfg, &worst2);
    push(hs, "range_condition_m1", res1 <= cfg.residual_tol, res1);
    push(hs, "range_condition_m2", res2 <= cfg.residual_tol, res2);

    check_flag(hs, "m1_parts_weak_regular_type1", all_parts_weak_regular_I(m1, cfg));
    check_flag(hs, "m2_parts_weak_regular_type1", all_parts_weak_regular_I(m2, cfg));

    double margin = std::numeric_limits<double>::infinity();
    bool ordered = true;
    for (int k = 0; k < m1.size(); ++k) {
        Matrix diff = mode == MultiCompareMode::BY_V
                          ? m2.part(k).v() - m1.part(k).v()
                          : m1.part(k).u_pinv() - m2.part(k).u_pinv();
        ordered = ordered && is_nonneg(diff, cfg);
        margin = std::min(margin, diff.min_entry());
    }
    push(hs,
         mode == MultiCompareMode::BY_V ? "v2_parts_geq_v1_parts" : "pinv_u1_parts_geq_pinv_u2_parts",
         ordered, margin);

    v.strict = false;
    v.rho1 = m1.rho();
    v.rho2 = m2.rho();
    v.applicable = std::all_of(hs.begin(), hs.end(),
                               [](const HypothesisCheck& h) { return h.satisfied; });
    v.conclusion_holds = (v.rho2 - v.rho1 > -kGapTol) && (v.rho2 < 1.0 - kGapTol);
    return v;
}

ExtremalBoundsReport extremal_bounds(const ProperMultisplitting& ms, const Matrix& u_lo,
                                     const Matrix& u_hi, const ToleranceConfig& cfg) {
    validate(cfg);
    ProperSplitting lo = ProperSplitting::make(ms.a(), u_lo, cfg);
    ProperSplitting hi = ProperSplitting::make(ms.a(), u_hi, cfg);

    ExtremalBoundsReport report;
    auto& hs = report.hypotheses_checked;
    check_flag(hs, "lo_proper_regular", classify(lo, cfg).proper_regular);
    check_flag(hs, "hi_proper_regular", classify(hi, cfg).proper_regular);
    check_nonneg(hs, "pinv_a_nonneg", ms.a_pinv(), cfg);
    check_flag(hs, "parts_weak_regular_type1", all_parts_weak_regular_I(ms, cfg));
    double range_res = range_condition_residual(ms, cfg, nullptr);
    push(hs, "range_condition", range_res <= cfg.residual_tol, range_res);

    double lo_margin = std::numeric_limits<double>::infinity();
    double hi_margin = std::numeric_limits<double>::infinity();
    bool lo_ok = true, hi_ok = true;
    for (int k = 0; k < ms.size(); ++k) {
        Matrix dlo = lo.u_pinv() - ms.part(k).u_pinv();
        Matrix dhi = ms.part(k).u_pinv() - hi.u_pinv();
        lo_ok = lo_ok && is_nonneg(dlo, cfg);
        hi_ok = hi_ok && is_nonneg(dhi, cfg);
        lo_margin = std::min(lo_margin, dlo.min_entry());
        hi_margin = std::min(hi_margin, dhi.min_entry());
    }
    push(hs, "pinv_u_lo_geq_part_pinvs", lo_ok, lo_margin);
    push(hs, "part_pinvs_geq_pinv_u_hi", hi_ok, hi_margin);
    double rs = min_row_sum(hi.u_pinv());
    push(hs, "pinv_u_hi_row_sums_positive", rs > cfg.sign_tol, rs);

    report.applicable = std::all_of(hs.begin(), hs.end(),
                                    [](const HypothesisCheck& h) { return h.satisfied; });
    report.rho_lo = lo.rho();
    report.rho_multi = ms.rho();
    report.rho_hi = hi.rho();
    report.bounds_hold = report.rho_multi >= report.rho_lo - kGapTol &&
                         report.rho_multi <= report.rho_hi + kGapTol &&
                         report.rho_hi < 1.0 - kGapTol;
    return report;
}

}  // namespace propersplit
