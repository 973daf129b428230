#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "generators.hpp"
#include "golden_fixtures.hpp"
#include "oracles.hpp"
#include "propersplit/comparison.hpp"
#include "propersplit/eigen.hpp"
#include "propersplit/errors.hpp"
#include "propersplit/multisplitting.hpp"
#include "propersplit/solver.hpp"
#include "propersplit/splitting.hpp"

using namespace propersplit;

namespace {

Matrix column(std::initializer_list<double> entries) {
    Matrix out(static_cast<int>(entries.size()), 1);
    int i = 0;
    for (double e : entries) out(i++, 0) = e;
    return out;
}

void check_converged_shape(const IterationReport& r, const SolveConfig& cfg) {
    CHECK(r.converged);
    CHECK(r.final_step <= cfg.step_tol);
    CHECK(r.iterations < cfg.max_iters);
    CHECK(r.rho_estimate >= 0.0);
}

}  // namespace

TEST_CASE("solve_single reaches the minimum-norm least-squares solution") {
    const ProperSplitting s = ProperSplitting::make(fixtures::wr1_a(), fixtures::wr1_u());
    const Matrix b = column({1, 1});
    const SolveConfig cfg{};
    const IterationReport r = solve_single(s, b);

    check_converged_shape(r, cfg);
    CHECK(r.iterations > 0);
    CHECK(r.solution.rows() == 3);
    CHECK(r.solution.cols() == 1);
    // pinv(A) b for this system is (3/7, 5/7, 3/7).
    CHECK(std::abs(r.solution(0, 0) - 3.0 / 7.0) <= 1e-8);
    CHECK(std::abs(r.solution(1, 0) - 5.0 / 7.0) <= 1e-8);
    CHECK(std::abs(r.solution(2, 0) - 3.0 / 7.0) <= 1e-8);
    CHECK(r.error_vs_pinv <= 100.0 * cfg.step_tol);
    CHECK(r.nullspace_component <= 1e-8);
    CHECK(r.normal_residual <= 1e-8);
    CHECK(std::abs(r.rho_estimate - fixtures::wr1_rho) <= 0.05);
    CHECK(r.history.empty());  // track_history defaults to off
}

TEST_CASE("a zero V converges in one iteration to pinv(U) b") {
    const Matrix a = fixtures::wr1_a();
    const ProperSplitting s = ProperSplitting::make(a, a);
    CHECK(s.v().max_abs() == 0.0);
    const Matrix b = column({2, -1});
    SolveConfig cfg;
    cfg.track_history = true;
    const IterationReport r = solve_single(s, b, std::nullopt, cfg);

    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK(r.solution.equal_entries(s.u_pinv() * b));
    CHECK(r.final_step == 0.0);
    CHECK(r.error_vs_pinv <= 1e-12);
    REQUIRE(r.history.size() == 2);  // one advancing step plus the confirming probe
    CHECK(r.history[0] > 0.0);
    CHECK(r.history[1] == 0.0);
}

TEST_CASE("an initial vector at the fixed point is kept without advancing") {
    const ProperSplitting s = ProperSplitting::make(fixtures::wr1_a(), fixtures::wr1_u());
    const Matrix b = column({1, 1});
    const Matrix x0 = s.a_pinv() * b;
    SolveConfig cfg;
    cfg.track_history = true;
    const IterationReport r = solve_single(s, b, x0, cfg);

    CHECK(r.converged);
    CHECK(r.iterations == 0);
    CHECK(r.solution.equal_entries(x0));
    CHECK(r.final_step <= cfg.step_tol);
    REQUIRE(r.history.size() == 1);
}

TEST_CASE("a nullspace component in the initial vector dies after one step") {
    const Matrix a = fixtures::wr1_a();
    const ProperSplitting s = ProperSplitting::make(a, fixtures::wr1_u());
    const Matrix b = column({1, 1});
    const Matrix target = s.a_pinv() * b;
    // (1, 0, -1) spans N(A); the iteration matrix maps it to zero exactly, so
    // one advancing step lands on the fixed point and the next probe accepts.
    const Matrix nu = column({0.7, 0, -0.7});
    CHECK((a * nu).max_abs() == 0.0);
    const Matrix x0 = target + nu;

    const IterationReport r = solve_single(s, b, x0);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK((r.solution - target).inf_norm() <= 1e-12);
    CHECK(r.nullspace_component <= 1e-12);
}

TEST_CASE("solver input validation") {
    const ProperSplitting s = ProperSplitting::make(fixtures::wr1_a(), fixtures::wr1_u());
    const Matrix good_b = column({1, 1});

    CHECK_THROWS_WITH_AS(solve_single(s, column({1, 1, 1})),
                         "right-hand side must be a 2x1 column", DimensionMismatch);
    CHECK_THROWS_AS(solve_single(s, Matrix({{1, 2}, {3, 4}})), DimensionMismatch);
    CHECK_THROWS_WITH_AS(solve_single(s, good_b, column({0, 0})),
                         "initial vector must be a 3x1 column", DimensionMismatch);

    Matrix bad_b = good_b;
    bad_b(0, 0) = std::nan("");
    CHECK_THROWS_AS(solve_single(s, bad_b), InvalidMatrix);

    SolveConfig zero_iters;
    zero_iters.max_iters = 0;
    CHECK_THROWS_WITH_AS(solve_single(s, good_b, std::nullopt, zero_iters),
                         "solver config: max_iters must be positive", PreconditionFailed);
    SolveConfig zero_tol;
    zero_tol.step_tol = 0.0;
    CHECK_THROWS_WITH_AS(solve_single(s, good_b, std::nullopt, zero_tol),
                         "solver config: step_tol must be positive", PreconditionFailed);

    const ProperMultisplitting ms =
        make_multisplitting(s.a(), {s.u()}, {Matrix::identity(3)});
    CHECK_THROWS_AS(solve_multi(ms, column({1, 1, 1})), DimensionMismatch);
    CHECK_THROWS_AS(solve_multi(ms, good_b, column({0, 0, 0, 0})), DimensionMismatch);
}

TEST_CASE("the convergence factor estimate tracks the spectral radius") {
    const ProperSplitting s = ProperSplitting::make(fixtures::t2_a(), fixtures::t2_u());
    gen::Rng rng(0x50facade50facadeull);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix b = gen::random_matrix(rng, 2, 1, -2.0, 2.0);
        const IterationReport r = solve_single(s, b);
        check_converged_shape(r, SolveConfig{});
        CHECK(r.error_vs_pinv <= 1e-8);
        CHECK(std::abs(r.rho_estimate - fixtures::t2_rho) <= 0.05);
    }
}

TEST_CASE("step ratios settle into the spectral radius band after burn-in") {
    SolveConfig cfg;
    cfg.track_history = true;

    SUBCASE("dense iteration matrix") {
        const ProperSplitting s =
            ProperSplitting::make(fixtures::alpha_a(), fixtures::alpha_u2());
        const double rho = s.rho();
        CHECK(std::abs(rho - fixtures::alpha_rho2) <= 5e-4);
        const IterationReport r = solve_single(s, column({1, 1}), std::nullopt, cfg);
        CHECK(r.converged);
        REQUIRE(r.iterations > 60);
        for (std::size_t i = 50; i + 1 < r.history.size(); ++i) {
            REQUIRE(r.history[i] > 0.0);
            const double ratio = r.history[i + 1] / r.history[i];
            CHECK(ratio >= rho - 0.1);
            CHECK(ratio <= rho + 0.1);
        }
    }

    SUBCASE("diagonal iteration matrix with a wide eigenvalue gap") {
        // U = A diag(5, 1.25) gives pinv(U) V = diag(0.8, 0.2) exactly.
        const Matrix a({{2, 0}, {0, 3}, {0, 0}});
        const Matrix u({{10, 0}, {0, 3.75}, {0, 0}});
        const ProperSplitting s = ProperSplitting::make(a, u);
        CHECK(std::abs(s.rho() - 0.8) <= 1e-12);
        const IterationReport r = solve_single(s, column({1, 1, 1}), std::nullopt, cfg);
        CHECK(r.converged);
        REQUIRE(r.iterations > 60);
        for (std::size_t i = 50; i + 1 < r.history.size(); ++i) {
            const double ratio = r.history[i + 1] / r.history[i];
            CHECK(ratio >= 0.7);
            CHECK(ratio <= 0.9);
        }
        CHECK(std::abs(r.rho_estimate - 0.8) <= 0.05);
    }
}

TEST_CASE("the estimate lands within 0.05 whenever the dominant eigenvalue gap exceeds 0.1") {
    gen::Rng rng(0xace0fba5eace0fbaull);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const int m = rng.range(4, 7);
        const int n = rng.range(4, 6);
        const gen::JacobiFamily fam = gen::random_jacobi(rng, m, n, 3);
        const ProperSplitting s = ProperSplitting::make(fam.a, fam.u_of(0.6));
        const Spectrum spec = eigenvalues(s.iter_matrix());
        REQUIRE(spec.eigenvalues.size() >= 2);
        const double gap = spec.eigenvalues[0].modulus() - spec.eigenvalues[1].modulus();
        if (gap <= 0.1) continue;
        const Matrix b = gen::random_matrix(rng, m, 1, -1.0, 1.0);
        const IterationReport r = solve_single(s, b);
        CHECK(r.converged);
        CHECK(std::abs(r.rho_estimate - s.rho()) <= 0.05);
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("iteration counts respect asserted radius orderings") {
    SUBCASE("same system, ratio-bound rule") {
        const ProperSplitting s1 =
            ProperSplitting::make(fixtures::alpha_a(), fixtures::alpha_u1());
        const ProperSplitting s2 =
            ProperSplitting::make(fixtures::alpha_a(), fixtures::alpha_u2());
        const ComparisonVerdict v =
            compare_same_A(s1, s2, TheoremId::MAIN8, fixtures::alpha_value);
        REQUIRE(v.applicable);
        REQUIRE(v.rho2 - v.rho1 > 0.05);
        const Matrix b = column({1, 1});
        const IterationReport r1 = solve_single(s1, b);
        const IterationReport r2 = solve_single(s2, b);
        CHECK(r1.converged);
        CHECK(r2.converged);
        CHECK(r1.iterations <= r2.iterations);
    }

    SUBCASE("same system, nonpositive pseudoinverse rule") {
        const ProperSplitting small =
            ProperSplitting::make(fixtures::neg_pinv_a(), fixtures::neg_pinv_u2());
        const ProperSplitting large =
            ProperSplitting::make(fixtures::neg_pinv_a(), fixtures::neg_pinv_u1());
        const ComparisonVerdict v =
            compare_same_A(small, large, TheoremId::NEG_PINV, std::nullopt);
        REQUIRE(v.applicable);
        REQUIRE(v.rho2 - v.rho1 > 0.05);
        const Matrix b = column({1, -1});
        const IterationReport r1 = solve_single(small, b);
        const IterationReport r2 = solve_single(large, b);
        CHECK(r1.converged);
        CHECK(r2.converged);
        CHECK(r1.iterations <= r2.iterations);
    }

    SUBCASE("generated families") {
        gen::Rng rng(0x0c0ffee0c0ffee00ull);
        int checked = 0;
        for (int trial = 0; trial < 15; ++trial) {
            const int m = rng.range(4, 7);
            const int n = rng.range(4, 6);
            const gen::JacobiFamily fam = gen::random_jacobi(rng, m, n, 3);
            const ProperSplitting s1 = ProperSplitting::make(fam.a, fam.u_of(0.35));
            const ProperSplitting s2 = ProperSplitting::make(fam.a, fam.u_of(0.85));
            const ComparisonVerdict v =
                compare_same_A(s1, s2, TheoremId::D4_I, std::nullopt);
            REQUIRE(v.applicable);
            if (v.rho2 - v.rho1 <= 0.05) continue;
            const Matrix b = gen::random_matrix(rng, m, 1, -1.0, 1.0);
            const IterationReport r1 = solve_single(s1, b);
            const IterationReport r2 = solve_single(s2, b);
            CHECK(r1.converged);
            CHECK(r2.converged);
            CHECK(r1.iterations <= r2.iterations);
            ++checked;
        }
        CHECK(checked >= 8);
    }
}

TEST_CASE("a one part multisplitting with identity weight reproduces solve_single bitwise") {
    const ProperSplitting s = ProperSplitting::make(fixtures::wr1_a(), fixtures::wr1_u());
    const ProperMultisplitting ms =
        make_multisplitting(s.a(), {s.u()}, {Matrix::identity(3)});
    gen::Rng rng(0x7ea7177ea7177ea7ull);
    const Matrix b = gen::random_matrix(rng, 2, 1, -2.0, 2.0);
    const Matrix x0 = gen::random_matrix(rng, 3, 1, -1.0, 1.0);
    SolveConfig cfg;
    cfg.track_history = true;

    const IterationReport single = solve_single(s, b, x0, cfg);
    const IterationReport multi = solve_multi(ms, b, x0, cfg);

    CHECK(single.converged);
    CHECK(multi.converged == single.converged);
    CHECK(multi.iterations == single.iterations);
    CHECK(multi.solution.equal_entries(single.solution));
    CHECK(multi.final_step == single.final_step);
    CHECK(multi.error_vs_pinv == single.error_vs_pinv);
    CHECK(multi.rho_estimate == single.rho_estimate);
    CHECK(multi.nullspace_component == single.nullspace_component);
    CHECK(multi.normal_residual == single.normal_residual);
    REQUIRE(multi.history.size() == single.history.size());
    for (std::size_t i = 0; i < multi.history.size(); ++i) {
        CHECK(multi.history[i] == single.history[i]);
    }
}

TEST_CASE("multisplitting runs converge to the pseudoinverse solution") {
    gen::Rng rng(0x5eed5eed5eed5eedull);
    for (int trial = 0; trial < 10; ++trial) {
        const int m = rng.range(5, 8);
        const int p = rng.range(2, 4);
        const gen::MultiInstance inst = gen::random_multi(rng, m, 3, p);
        const ProperMultisplitting ms =
            make_multisplitting(inst.fam.a, inst.us, inst.es);
        const Matrix b = gen::random_matrix(rng, m, 1, -2.0, 2.0);
        const IterationReport r = solve_multi(ms, b);
        check_converged_shape(r, SolveConfig{});
        CHECK(r.error_vs_pinv <= 1e-7);
        CHECK(r.nullspace_component <= 1e-8);
        CHECK(r.normal_residual <= 1e-8);
        // Independent target from the replication factors.
        CHECK((r.solution - inst.fam.a_pinv() * b).inf_norm() <= 1e-7);
    }
}

TEST_CASE("weights push transient iterates out of the row space but not the limit") {
    const Matrix a = fixtures::wr1_a();
    const Matrix u = fixtures::wr1_u();
    const std::vector<Matrix> us{u, u * 2.0};
    const std::vector<Matrix> es{Matrix::diagonal({1, 0, 0}), Matrix::diagonal({0, 1, 1})};
    const ProperMultisplitting ms = make_multisplitting(a, us, es);
    CHECK(std::abs(ms.rho() - 0.75) <= 1e-9);

    const Matrix b = column({1, 1});
    const Matrix first = ms.g() * b;  // iterate after one step from x0 = 0
    const Matrix row_space_projector = ms.a_pinv() * a;
    CHECK((first - row_space_projector * first).inf_norm() > 1e-3);

    const IterationReport multi = solve_multi(ms, b);
    CHECK(multi.converged);
    CHECK(multi.error_vs_pinv <= 1e-8);
    CHECK(multi.nullspace_component <= 1e-8);

    const ProperSplitting s = ProperSplitting::make(a, u);
    const IterationReport single = solve_single(s, b);
    CHECK(single.converged);
    CHECK(multi.iterations > single.iterations);  // rho 0.75 vs 0.5
}

TEST_CASE("divergent iterations are flagged rather than reported as converged") {
    gen::Rng rng(0xbad5eedbad5eed00ull);

    SUBCASE("single splitting, full budget") {
        for (int trial = 0; trial < 5; ++trial) {
            const gen::DivergentSplit d = gen::random_divergent(rng, 5, 4, 3);
            const ProperSplitting s = ProperSplitting::make(d.a, d.u);
            CHECK(s.rho() >= 1.04);
            const Matrix b = gen::random_matrix(rng, 5, 1, -1.0, 1.0);
            const IterationReport r = solve_single(s, b);
            CHECK_FALSE(r.converged);
            CHECK((r.final_step > 1e10 || !std::isfinite(r.final_step) ||
                   r.iterations == SolveConfig{}.max_iters));
        }
    }

    SUBCASE("growing step norms under a short budget") {
        const gen::DivergentSplit d = gen::random_divergent(rng, 5, 4, 3);
        const ProperSplitting s = ProperSplitting::make(d.a, d.u);
        const Matrix b = gen::random_matrix(rng, 5, 1, -1.0, 1.0);
        SolveConfig cfg;
        cfg.max_iters = 40;
        cfg.track_history = true;
        const IterationReport r = solve_single(s, b, std::nullopt, cfg);
        CHECK_FALSE(r.converged);
        CHECK(r.iterations == 40);
        REQUIRE(r.history.size() == 40);
        CHECK(r.history.back() > r.history.front());
        CHECK(r.final_step > cfg.step_tol);
    }

    SUBCASE("multisplitting with a divergent part") {
        const gen::DivergentSplit d = gen::random_divergent(rng, 5, 4, 3);
        const ProperMultisplitting ms =
            make_multisplitting(d.a, {d.u}, {Matrix::identity(4)});
        CHECK(ms.rho() >= 1.0);
        const Matrix b = gen::random_matrix(rng, 5, 1, -1.0, 1.0);
        const IterationReport r = solve_multi(ms, b);
        CHECK_FALSE(r.converged);
    }
}

TEST_CASE("residual computes the normal equations certificate") {
    const Matrix a = fixtures::wr1_a();
    const ProperSplitting s = ProperSplitting::make(a, fixtures::wr1_u());

    CHECK(residual(a, column({0, 0, 0}), column({1, 0})) == 2.0);  // |A^T e1| row max

    const Matrix b = column({1, 1});
    CHECK(residual(a, s.a_pinv() * b, b) <= 1e-10);

    const Matrix x_true = column({1, 2, 3});
    const Matrix consistent = a * x_true;
    const IterationReport r = solve_single(s, consistent);
    CHECK(r.converged);
    CHECK(residual(a, r.solution, consistent) <= 1e-8);
    CHECK((a * r.solution - consistent).inf_norm() <= 1e-9);

    CHECK_THROWS_WITH_AS(residual(a, column({0, 0}), column({1, 0})),
                         "residual: x must be n x 1 and b must be m x 1", DimensionMismatch);
    CHECK_THROWS_AS(residual(a, column({0, 0, 0}), column({1, 0, 0})), DimensionMismatch);
}

TEST_CASE("inconsistent right-hand sides still reach least-squares stationarity") {
    gen::Rng rng(0xfeedf00dfeedf00dull);
    for (int trial = 0; trial < 6; ++trial) {
        const gen::ScaledSplit sc =
            gen::random_scaled(rng, 4, 3, 2, true, false, 1.3, 2.5);
        const ProperSplitting s = ProperSplitting::make(sc.a, sc.u);
        const Matrix b = gen::random_matrix(rng, 4, 1, -2.0, 2.0);
        const IterationReport r = solve_single(s, b);
        CHECK(r.converged);
        CHECK((sc.a * r.solution - b).inf_norm() > 1e-6);  // b genuinely off R(A)
        CHECK(r.normal_residual <= 1e-8);
        CHECK(r.error_vs_pinv <= 1e-8);
        CHECK((r.solution - sc.a_pinv * b).inf_norm() <= 1e-7);
        CHECK(r.nullspace_component <= 1e-8);
    }
}

TEST_CASE("max_iters caps the run and the report stays honest") {
    const ProperSplitting s =
        ProperSplitting::make(fixtures::alpha_a(), fixtures::alpha_u2());
    const Matrix b = column({1, 1});
    SolveConfig capped;
    capped.max_iters = 25;
    capped.track_history = true;
    const IterationReport r = solve_single(s, b, std::nullopt, capped);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 25);
    REQUIRE(r.history.size() == 25);
    CHECK(r.final_step > capped.step_tol);
    CHECK(r.error_vs_pinv > 1e-6);

    const IterationReport full = solve_single(s, b);
    CHECK(full.converged);
    CHECK(full.error_vs_pinv <= 1e-8);
}
