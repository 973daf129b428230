#include "propersplit/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>

#include "propersplit/errors.hpp"
#include "propersplit/linalg.hpp"
#include "propersplit/pinv.hpp"

namespace propersplit {

ProperSplitting::ProperSplitting(Matrix a, Matrix u, Matrix v, Matrix u_pinv, Matrix a_pinv,
                                 Matrix iter, Matrix iter_t2, double rho)
    : a_(std::move(a)),
      u_(std::move(u)),
      v_(std::move(v)),
      u_pinv_(std::move(u_pinv)),
      a_pinv_(std::move(a_pinv)),
      iter_(std::move(iter)),
      iter_t2_(std::move(iter_t2)),
      rho_(rho) {}

ProperSplitting ProperSplitting::make(const Matrix& a, const Matrix& u, const ToleranceConfig& cfg) {
    if (!a.same_shape(u)) throw DimensionMismatch("splitting requires A and U of equal shape");
    const Matrix a_pinv = pinv(a, cfg);
    const Matrix u_pinv = pinv(u, cfg);
    const double range_res =
        std::max(rel_residual(a * (a_pinv * u), u), rel_residual(u * (u_pinv * a), a));
    const double nullspace_res =
        std::max(rel_residual((u * a_pinv) * a, u), rel_residual((a * u_pinv) * u, a));
    if (range_res > cfg.residual_tol || nullspace_res > cfg.residual_tol) {
        throw NotProper("splitting is not proper: range residual " + std::to_string(range_res) +
                            ", nullspace residual " + std::to_string(nullspace_res),
                        range_res, nullspace_res);
    }
    Matrix v = u - a;
    Matrix iter = u_pinv * v;
    Matrix iter_t2 = v * u_pinv;
    const double rho =
        (iter.rows() <= iter_t2.rows()) ? spectral_radius(iter, cfg) : spectral_radius(iter_t2, cfg);
    return ProperSplitting(a, u, std::move(v), u_pinv, a_pinv, std::move(iter), std::move(iter_t2),
                           rho);
}

ProperSplitting make_splitting(const Matrix& a, const Matrix& u, const ToleranceConfig& cfg) {
    return ProperSplitting::make(a, u, cfg);
}

SplittingClassification classify(const ProperSplitting& s, const ToleranceConfig& cfg) {
    SplittingClassification c;
    const bool upinv_nonneg = is_nonneg(s.u_pinv(), cfg);
    c.nonnegative_I = is_nonneg(s.iter_matrix(), cfg);
    c.nonnegative_II = is_nonneg(s.iter_matrix_t2(), cfg);
    c.weak_regular_I = upinv_nonneg && c.nonnegative_I;
    c.weak_regular_II = upinv_nonneg && c.nonnegative_II;
    c.proper_regular = upinv_nonneg && is_nonneg(s.v(), cfg);
    c.rho = s.rho();
    c.convergent = c.rho < 1.0 - cfg.eig_tol;
    return c;
}

IdentityReport verify_splitting_identities(const ProperSplitting& s, const ToleranceConfig& cfg) {
    IdentityReport report;
    const int n = s.a().cols();
    const int m = s.a().rows();
    const Matrix i_minus_uv = Matrix::identity(n) - s.iter_matrix();
    const Matrix i_minus_vu = Matrix::identity(m) - s.iter_matrix_t2();

    auto add = [&](std::string name, double residual, bool pass) {
        report.checks.push_back({std::move(name), residual, pass});
    };

    const double r1 = rel_residual(s.u() * i_minus_uv, s.a());
    add("a_eq_u_times_i_minus_uv", r1, r1 <= cfg.residual_tol);

    double min_mod = 0.0;
    bool invertible = false;
    {
        const Spectrum spec = eigenvalues(i_minus_uv, cfg);
        min_mod = spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.back().modulus();
        invertible = min_mod > cfg.eig_tol;
    }
    add("i_minus_uv_invertible_min_eigenmodulus", min_mod, invertible);

    if (invertible) {
        const Matrix inv_uv = lu_inverse(i_minus_uv);
        const double r2 = rel_residual(inv_uv * s.u_pinv(), s.a_pinv());
        add("pinv_a_eq_inv_i_minus_uv_times_pinv_u", r2, r2 <= cfg.residual_tol);
    } else {
        add("pinv_a_eq_inv_i_minus_uv_times_pinv_u", std::numeric_limits<double>::infinity(), false);
    }

    const double r3 = rel_residual(i_minus_vu * s.u(), s.a());
    add("a_eq_i_minus_vu_times_u", r3, r3 <= cfg.residual_tol);

    bool invertible2 = false;
    {
        const Spectrum spec = eigenvalues(i_minus_vu, cfg);
        const double mm = spec.eigenvalues.empty() ? 0.0 : spec.eigenvalues.back().modulus();
        invertible2 = mm > cfg.eig_tol;
    }
    if (invertible2) {
        const Matrix inv_vu = lu_inverse(i_minus_vu);
        const double r4 = rel_residual(s.u_pinv() * inv_vu, s.a_pinv());
        add("pinv_a_eq_pinv_u_times_inv_i_minus_vu", r4, r4 <= cfg.residual_tol);
    } else {
        add("pinv_a_eq_pinv_u_times_inv_i_minus_vu", std::numeric_limits<double>::infinity(), false);
    }

    report.all_pass = true;
    for (const auto& chk : report.checks) report.all_pass = report.all_pass && chk.pass;
    return report;
}

namespace {

std::complex<double> to_complex(const Eigenvalue& e) { return {e.re, e.im}; }

// Greville-style existence matching: each value of `from`, pushed through
// `map`, must be close to some value of `to`.
std::vector<EigenPairMatch> match_spectra(const std::vector<Eigenvalue>& from,
                                          const std::vector<Eigenvalue>& to, bool forward) {
    std::vector<EigenPairMatch> out;
    for (const Eigenvalue& src : from) {
        EigenPairMatch match;
        match.value = src;
        match.distance = std::numeric_limits<double>::infinity();
        for (const Eigenvalue& cand : to) {
            const std::complex<double> c = to_complex(cand);
            std::complex<double> mapped;
            if (forward) {
                // cand = mu in spec(U^+ V); compare src = lambda to mu/(1-mu).
                const std::complex<double> denom = 1.0 - c;
                if (std::abs(denom) < 1e-14) continue;
                mapped = c / denom;
            } else {
                // cand = lambda in spec(A^+ V); compare src = mu to lambda/(1+lambda).
                const std::complex<double> denom = 1.0 + c;
                if (std::abs(denom) < 1e-14) continue;
                mapped = c / denom;
            }
            const double dist = std::abs(mapped - to_complex(src));
            if (dist < match.distance) {
                match.distance = dist;
                match.mapped = {mapped.real(), mapped.imag()};
            }
        }
        match.matched = match.distance <= 1e-6 * std::max(1.0, src.modulus());
        out.push_back(match);
    }
    return out;
}

}  // namespace

CorrespondenceReport eigen_correspondence(const ProperSplitting& s, const ToleranceConfig& cfg) {
    const Matrix apinv_v = s.a_pinv() * s.v();
    const Spectrum lam = eigenvalues(apinv_v, cfg);
    const Spectrum mu = eigenvalues(s.iter_matrix(), cfg);
    CorrespondenceReport report;
    report.forward = match_spectra(lam.eigenvalues, mu.eigenvalues, true);
    report.backward = match_spectra(mu.eigenvalues, lam.eigenvalues, false);
    report.all_matched = true;
    for (const auto& m : report.forward) report.all_matched = report.all_matched && m.matched;
    for (const auto& m : report.backward) report.all_matched = report.all_matched && m.matched;
    return report;
}

double rho_via_ratio(const ProperSplitting& s, const ToleranceConfig& cfg) {
    const Matrix apinv_v = s.a_pinv() * s.v();
    double r = 0.0;
    if (is_nonneg(apinv_v, cfg)) {
        r = spectral_radius(apinv_v, cfg);
    } else {
        const Matrix v_apinv = s.v() * s.a_pinv();
        if (!is_nonneg(v_apinv, cfg)) {
            throw PreconditionFailed(
                "ratio formula requires pinv(A) V >= 0 or V pinv(A) >= 0; neither holds");
        }
        r = spectral_radius(v_apinv, cfg);
    }
    const double result = r / (1.0 + r);
    if (std::fabs(result - s.rho()) > 1e-8 * std::max(1.0, s.rho())) {
        throw SoundnessAlarm("ratio formula value " + std::to_string(result) +
                             " disagrees with spectral radius " + std::to_string(s.rho()));
    }
    return result;
}

PerronWitness perron_witness(const ProperSplitting& s, const ToleranceConfig& cfg) {
    const SplittingClassification c = classify(s, cfg);
    if (!c.weak_regular_II) {
        throw PreconditionFailed("perron witness requires a weak regular type II splitting");
    }
    if (!is_nonneg(s.a_pinv(), cfg)) {
        throw PreconditionFailed("perron witness requires a semimonotone matrix (pinv(A) >= 0)");
    }
    if (!(s.rho() > cfg.eig_tol)) {
        throw PreconditionFailed("perron witness requires rho(U^+ V) > 0");
    }
    // Power method on I + V U^+; the shift makes the Perron root of the
    // nonnegative matrix the unique dominant eigenvalue in modulus.
    const int m = s.a().rows();
    const Matrix shifted = Matrix::identity(m) + s.iter_matrix_t2();
    Matrix z(m, 1);
    for (int i = 0; i < m; ++i) z(i, 0) = 1.0;
    double lambda = 0.0;
    bool settled = false;
    const int budget = 10000;
    for (int it = 0; it < budget; ++it) {
        Matrix w = shifted * z;
        double num = 0.0;
        double den = 0.0;
        for (int i = 0; i < m; ++i) {
            num += z(i, 0) * w(i, 0);
            den += z(i, 0) * z(i, 0);
        }
        const double rayleigh = num / den;
        double scale = w.max_abs();
        if (scale == 0.0) throw PowerMethodStall("power method collapsed to the zero vector");
        for (int i = 0; i < m; ++i) w(i, 0) /= scale;
        double step_res = 0.0;
        for (int i = 0; i < m; ++i) {
            step_res = std::max(step_res, std::fabs(w(i, 0) - z(i, 0)));
        }
        z = w;
        if (std::fabs(rayleigh - lambda) <= cfg.eig_tol * std::max(1.0, std::fabs(rayleigh)) &&
            step_res <= cfg.eig_tol) {
            lambda = rayleigh;
            settled = true;
            break;
        }
        lambda = rayleigh;
    }
    if (!settled) throw PowerMethodStall("power method did not settle within 10000 iterations");

    const double rho = std::max(lambda - 1.0, 0.0);
    PerronWitness w{s.u_pinv() * z, rho, Matrix(1, 1), Matrix(1, 1)};
    w.ax = s.a() * w.x;
    w.vx = s.v() * w.x;

    const double check_tol = std::max(cfg.eig_tol, 1e-8);
    if (!is_semipositive(w.x, cfg)) {
        throw SoundnessAlarm("perron witness x is not semipositive");
    }
    const Matrix residual = s.iter_matrix() * w.x - w.x * rho;
    if (residual.max_abs() > check_tol * std::max(1.0, w.x.max_abs())) {
        throw SoundnessAlarm("perron witness eigen equation residual too large");
    }
    if (!is_nonneg(w.ax, cfg) || !is_nonneg(w.vx, cfg)) {
        throw SoundnessAlarm("perron witness A x or V x has a negative entry");
    }
    if (std::fabs(rho - s.rho()) > check_tol * std::max(1.0, s.rho())) {
        throw SoundnessAlarm("perron witness rho disagrees with spectral radius");
    }
    return w;
}

}  // namespace propersplit
