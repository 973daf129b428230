#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "generators.hpp"
#include "oracles.hpp"
#include "golden_fixtures.hpp"
#include "propersplit/eigen.hpp"
#include "propersplit/errors.hpp"
#include "propersplit/linalg.hpp"
#include "propersplit/pinv.hpp"
#include "propersplit/splitting.hpp"

using namespace propersplit;

namespace {

double entry_gap(const Matrix& x, const Matrix& y) { return (x - y).max_abs(); }

}  // namespace

TEST_CASE("weak regular type I fixture: classification, radius, exact pseudoinverse") {
    ProperSplitting s = make_splitting(fixtures::wr1_a(), fixtures::wr1_u());

    Matrix expected_upinv({{5.0 / 14.0, 1.0 / 14.0},
                           {3.0 / 14.0, 2.0 / 14.0},
                           {5.0 / 14.0, 1.0 / 14.0}});
    CHECK(entry_gap(s.u_pinv(), expected_upinv) < 1e-12);

    // V is stored as the exact difference U - A.
    CHECK(s.v().equal_entries(fixtures::wr1_u() - fixtures::wr1_a()));
    CHECK(s.v().equal_entries(Matrix({{0, -1, 0}, {0, 5, 0}})));

    // pinv(U) V collapses to a single 0.5 on the middle diagonal entry.
    Matrix expected_iter({{0, 0, 0}, {0, 0.5, 0}, {0, 0, 0}});
    CHECK(entry_gap(s.iter_matrix(), expected_iter) < 1e-12);
    CHECK(s.rho() == doctest::Approx(fixtures::wr1_rho).epsilon(1e-10));

    SplittingClassification c = classify(s);
    CHECK(c.proper);
    CHECK(!c.proper_regular);  // V has a negative entry
    CHECK(c.weak_regular_I);
    CHECK(!c.weak_regular_II);  // V pinv(U) has negative entries
    CHECK(c.nonnegative_I);
    CHECK(!c.nonnegative_II);
    CHECK(c.convergent);
    CHECK(c.rho == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("weak regular type II fixture: V pinv(U) is diagonal") {
    ProperSplitting s = make_splitting(fixtures::t2_a(), fixtures::t2_u());

    Matrix expected_upinv({{1.0 / 15.0, 1.0 / 12.0},
                           {0.0, 1.0 / 12.0},
                           {1.0 / 15.0, 0.0}});
    CHECK(entry_gap(s.u_pinv(), expected_upinv) < 1e-12);

    Matrix expected_t2({{0.4, 0.0}, {0.0, 0.25}});
    CHECK(entry_gap(s.iter_matrix_t2(), expected_t2) < 1e-12);
    CHECK(s.rho() == doctest::Approx(fixtures::t2_rho).epsilon(1e-10));

    SplittingClassification c = classify(s);
    CHECK(!c.proper_regular);
    CHECK(!c.weak_regular_I);  // pinv(U) V has a negative entry in its last row
    CHECK(c.weak_regular_II);
    CHECK(!c.nonnegative_I);
    CHECK(c.nonnegative_II);
    CHECK(c.convergent);
}

TEST_CASE("the trivial splitting V = 0 lands in every class with radius zero") {
    Matrix a({{2.0, 0.0, 0.0}, {0.0, 3.0, 0.0}});
    ProperSplitting s = make_splitting(a, a);
    CHECK(s.v().max_abs() == 0.0);
    SplittingClassification c = classify(s);
    CHECK(c.proper_regular);
    CHECK(c.weak_regular_I);
    CHECK(c.weak_regular_II);
    CHECK(c.nonnegative_I);
    CHECK(c.nonnegative_II);
    CHECK(c.convergent);
    CHECK(c.rho == 0.0);
}

TEST_CASE("splittings that change range or nullspace are rejected") {
    Matrix sing({{1.0, 0.0}, {0.0, 0.0}});
    try {
        make_splitting(sing, Matrix::identity(2));
        FAIL("expected NotProper");
    } catch (const NotProper& e) {
        CHECK(std::max(e.range_residual, e.nullspace_residual) > 1e-10);
        CHECK(e.part_index == -1);
        CHECK(std::string(e.what()).find("not proper") != std::string::npos);
    }

    // Rank drop inside U (columns 1 and 2 proportional).
    Matrix u_rank1({{2.0, -2.0, 2.0}, {-3.0, 3.0, -3.0}});
    CHECK_THROWS_AS(make_splitting(fixtures::wr1_a(), u_rank1), NotProper);

    // U with the wrong nullspace: same rank, different kernel direction.
    Matrix a2({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
    Matrix u2({{1.0, 0.0, 1.0}, {0.0, 1.0, 0.0}});
    CHECK_THROWS_AS(make_splitting(a2, u2), NotProper);

    CHECK_THROWS_AS(make_splitting(Matrix(2, 3), Matrix(3, 2)), DimensionMismatch);
}

TEST_CASE("splitting identities hold on the fixture set with named checks") {
    const std::vector<std::pair<Matrix, Matrix>> cases = {
        {fixtures::wr1_a(), fixtures::wr1_u()},
        {fixtures::t2_a(), fixtures::t2_u()},
        {fixtures::alpha_a(), fixtures::alpha_u1()},
        {fixtures::alpha_a(), fixtures::alpha_u2()},
        {fixtures::neg_pinv_a(), fixtures::neg_pinv_u1()},
    };
    for (const auto& [a, u] : cases) {
        ProperSplitting s = make_splitting(a, u);
        IdentityReport rep = verify_splitting_identities(s);
        REQUIRE(rep.checks.size() == 5);
        CHECK(rep.checks[0].name == "a_eq_u_times_i_minus_uv");
        CHECK(rep.checks[1].name == "i_minus_uv_invertible_min_eigenmodulus");
        CHECK(rep.checks[2].name == "pinv_a_eq_inv_i_minus_uv_times_pinv_u");
        CHECK(rep.checks[3].name == "a_eq_i_minus_vu_times_u");
        CHECK(rep.checks[4].name == "pinv_a_eq_pinv_u_times_inv_i_minus_vu");
        CHECK(rep.all_pass);
        for (size_t i : {size_t{0}, size_t{2}, size_t{3}, size_t{4}}) {
            CHECK(rep.checks[i].residual <= 1e-9);
        }
    }
}

TEST_CASE("identity sweep over random proper splittings of mixed shapes") {
    gen::Rng rng(0x1dea51dea51dea5ull);
    const int shapes[4][3] = {{2, 3, 2}, {3, 2, 2}, {4, 6, 3}, {5, 5, 3}};
    for (int trial = 0; trial < 200; ++trial) {
        const int* sh = shapes[trial % 4];
        gen::GenSplit g = gen::random_proper(rng, sh[0], sh[1], sh[2]);
        ProperSplitting s = make_splitting(g.a, g.u);
        IdentityReport rep = verify_splitting_identities(s);
        CAPTURE(trial);
        CHECK(rep.all_pass);
        for (size_t i : {size_t{0}, size_t{2}, size_t{3}, size_t{4}}) {
            CHECK(rep.checks[i].residual <= 1e-9);
        }
        // Library pinv agrees with the generator's factor-formula value.
        CHECK(entry_gap(s.a_pinv(), g.a_pinv) < 1e-8 * std::max(1.0, g.a_pinv.max_abs()));
    }
}

TEST_CASE("classification flags obey the containment lattice on random instances") {
    gen::Rng rng(0xc1a551f1ca7105ull);
    for (int trial = 0; trial < 150; ++trial) {
        ProperSplitting s = [&]() {
            switch (trial % 4) {
                case 0: {
                    gen::GenSplit g = gen::random_proper(rng, 3, 4, 2);
                    return make_splitting(g.a, g.u);
                }
                case 1: {
                    gen::ScaledSplit g = gen::random_scaled(rng, 4, 3, 2, true, false, 1.3, 2.0);
                    return make_splitting(g.a, g.u);
                }
                case 2: {
                    gen::ScaledSplit g = gen::random_scaled(rng, 3, 5, 3, false, true, 1.3, 2.0);
                    return make_splitting(g.a, g.u);
                }
                default: {
                    gen::JacobiFamily fam = gen::random_jacobi(rng, 4, 4, 2);
                    return make_splitting(fam.a, fam.u_of(rng.uniform(0.2, 0.9)));
                }
            }
        }();
        SplittingClassification c = classify(s);
        CAPTURE(trial);
        if (c.proper_regular) {
            CHECK(c.weak_regular_I);
            CHECK(c.weak_regular_II);
        }
        if (c.weak_regular_I) CHECK(c.nonnegative_I);
        if (c.weak_regular_II) CHECK(c.nonnegative_II);
        CHECK(c.convergent == (c.rho < 1.0 - 1e-10));

        // The two one-sided products share their nonzero spectrum.
        double r1 = spectral_radius(s.iter_matrix());
        double r2 = spectral_radius(s.iter_matrix_t2());
        CHECK(std::abs(r1 - r2) <= 1e-8 * std::max(1.0, r1));
    }
}

TEST_CASE("column scaled family has exact radius and type I flags") {
    gen::Rng rng(0x5ca1ab1e5ca1ab1eull);
    for (int trial = 0; trial < 40; ++trial) {
        gen::ScaledSplit g = gen::random_scaled(rng, 4, 5, 3, true, false, 1.25, 1.8);
        ProperSplitting s = make_splitting(g.a, g.u);
        SplittingClassification c = classify(s);
        CAPTURE(trial);
        CHECK(c.weak_regular_I);
        CHECK(c.nonnegative_I);
        CHECK(std::abs(s.rho() - g.rho_exact) <= 1e-9);
        CHECK(is_nonneg(s.a_pinv()));  // M-matrix core makes A semimonotone
    }
}

TEST_CASE("negated column scaled family keeps the nonnegative type but not weak regularity") {
    gen::Rng rng(0x00ddba11deadbea7ull);
    for (int trial = 0; trial < 40; ++trial) {
        gen::ScaledSplit g = gen::random_scaled(rng, 3, 4, 2, true, true, 1.25, 1.8);
        ProperSplitting s = make_splitting(g.a, g.u);
        SplittingClassification c = classify(s);
        CAPTURE(trial);
        CHECK(c.nonnegative_I);   // the sign flips cancel inside pinv(U) V
        CHECK(!c.weak_regular_I);  // but pinv(U) itself is nonpositive
        CHECK(std::abs(s.rho() - g.rho_exact) <= 1e-9);
        CHECK(!is_nonneg(s.a_pinv()));
        CHECK(is_nonneg(-s.a_pinv()));
    }
}

TEST_CASE("row scaled family lands in type II with exact radius") {
    gen::Rng rng(0xfeedc0defeedc0deull);
    for (int trial = 0; trial < 40; ++trial) {
        gen::ScaledSplit g = gen::random_scaled(rng, 5, 4, 3, false, false, 1.25, 1.8);
        ProperSplitting s = make_splitting(g.a, g.u);
        SplittingClassification c = classify(s);
        CAPTURE(trial);
        CHECK(c.weak_regular_II);
        CHECK(c.nonnegative_II);
        CHECK(std::abs(s.rho() - g.rho_exact) <= 1e-9);
    }
}

TEST_CASE("divergent instances are flagged as such") {
    gen::Rng rng(0xbadbadbadbad0001ull);
    for (int trial = 0; trial < 25; ++trial) {
        gen::DivergentSplit g = gen::random_divergent(rng, 4, 5, 3);
        ProperSplitting s = make_splitting(g.a, g.u);
        CAPTURE(trial);
        CHECK(s.rho() == doctest::Approx(g.rho_exact).epsilon(1e-6));
        CHECK(s.rho() >= 1.04);
        CHECK(!classify(s).convergent);
    }
}

TEST_CASE("eigenvalue correspondence between pinv(A) V and pinv(U) V") {
    ProperSplitting s = make_splitting(fixtures::wr1_a(), fixtures::wr1_u());
    CorrespondenceReport rep = eigen_correspondence(s);
    CHECK(rep.all_matched);
    // spec(pinv(U) V) = {0.5, 0, 0} maps to spec(pinv(A) V) = {1, 0, 0}.
    REQUIRE(!rep.forward.empty());
    CHECK(rep.forward[0].value.re == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(rep.forward[0].value.im) < 1e-8);
    REQUIRE(!rep.backward.empty());
    CHECK(rep.backward[0].value.re == doctest::Approx(0.5).epsilon(1e-8));
    // The best preimage lambda = 1 maps back through lambda/(1+lambda) = 0.5.
    CHECK(rep.backward[0].mapped.re == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(rep.backward[0].distance < 1e-8);

    gen::Rng rng(0xe16e4c0e16e4c0ull);
    for (int trial = 0; trial < 30; ++trial) {
        gen::GenSplit g = gen::random_proper(rng, 3, 4, 2);
        CAPTURE(trial);
        CHECK(eigen_correspondence(make_splitting(g.a, g.u)).all_matched);
    }
}

TEST_CASE("ratio formula recovers the spectral radius when a side is nonnegative") {
    ProperSplitting s1 = make_splitting(fixtures::wr1_a(), fixtures::wr1_u());
    CHECK(rho_via_ratio(s1) == doctest::Approx(0.5).epsilon(1e-9));

    ProperSplitting s2 = make_splitting(fixtures::t2_a(), fixtures::t2_u());
    CHECK(rho_via_ratio(s2) == doctest::Approx(0.4).epsilon(1e-9));

    // V = 0 gives ratio 0/(1+0) = 0.
    Matrix a({{2.0, 0.0}, {0.0, 3.0}});
    CHECK(rho_via_ratio(make_splitting(a, a)) == 0.0);

    // Rotation-flavoured V: neither pinv(A) V nor V pinv(A) is nonnegative.
    Matrix u_rot({{1.0, 0.5}, {-0.5, 1.0}});
    ProperSplitting s3 = make_splitting(Matrix::identity(2), u_rot);
    CHECK_THROWS_AS(rho_via_ratio(s3), PreconditionFailed);
}

TEST_CASE("perron witness on the diagonal type II fixture") {
    ProperSplitting s = make_splitting(fixtures::t2_a(), fixtures::t2_u());
    PerronWitness w = perron_witness(s);
    CHECK(w.rho == doctest::Approx(0.4).epsilon(1e-8));
    // Dominant direction is e1 of V pinv(U) = diag(0.4, 0.25), so the
    // witness is the first column of pinv(U): (1/15, 0, 1/15).
    REQUIRE(w.x.rows() == 3);
    double scale = w.x(0, 0);
    CHECK(scale > 0.0);
    CHECK(w.x(1, 0) / scale == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(w.x(2, 0) / scale == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(is_nonneg(w.ax));
    CHECK(is_nonneg(w.vx));
    // V x = (rho / (1 - rho)) A x at the witness: the ratio eigenvalue.
    double ratio = w.rho / (1.0 - w.rho);
    CHECK(entry_gap(w.vx, w.ax * ratio) < 1e-8 * std::max(1.0, w.ax.max_abs()));
}

TEST_CASE("perron witness on a monotone diagonal splitting U = 2A") {
    Matrix a({{2.0, 0.0}, {0.0, 3.0}});
    ProperSplitting s = make_splitting(a, a * 2.0);
    PerronWitness w = perron_witness(s);
    CHECK(w.rho == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(is_semipositive(w.x));
    // rho = 0.5 makes the ratio eigenvalue 1, so V x = A x here.
    CHECK(entry_gap(w.vx, w.ax) < 1e-8);
}

TEST_CASE("perron witness preconditions") {
    // Type I only: not weak regular of type II.
    ProperSplitting s1 = make_splitting(fixtures::wr1_a(), fixtures::wr1_u());
    CHECK_THROWS_WITH_AS(perron_witness(s1),
                         "perron witness requires a weak regular type II splitting",
                         PreconditionFailed);

    // Semimonotonicity fails when pinv(A) has negative entries.
    ProperSplitting s2 = make_splitting(fixtures::neg_pinv_a(), fixtures::neg_pinv_u2());
    CHECK_THROWS_AS(perron_witness(s2), PreconditionFailed);

    // V = 0 has radius zero, below the required threshold.
    Matrix a({{2.0, 0.0}, {0.0, 3.0}});
    CHECK_THROWS_AS(perron_witness(make_splitting(a, a)), PreconditionFailed);
}
