#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "msf/corpus.hpp"
#include "msf/diagnostics.hpp"

using namespace msf;

TEST_CASE("corpus shape and access") {
    const std::vector<Example>& all = corpus();
    REQUIRE(all.size() == 7);
    for (int id = 1; id <= 7; ++id) {
        const Example& ex = example(id);
        CHECK(ex.id == id);
        CHECK(ex.p.size() == static_cast<std::size_t>(ex.m) + 1);
        CHECK(ex.h.size() == static_cast<std::size_t>(ex.m) + 1);
        CHECK(ex.x.rows() == ex.r * ex.m);
        CHECK(ex.x.cols() == ex.r * ex.m);
        for (const SurdMatrix& c : ex.p) {
            CHECK(c.rows() == ex.r);
            CHECK(c.cols() == ex.r);
        }
        CHECK(!ex.name.empty());
    }
    CHECK_THROWS_AS(example(0), std::out_of_range);
    CHECK_THROWS_AS(example(8), std::out_of_range);
}

TEST_CASE("exact factorization identities P_j = sum_k H_k H_{k+j}^T") {
    for (const Example& ex : corpus()) {
        CAPTURE(ex.id);
        for (int j = 0; j <= ex.m; ++j) {
            SurdMatrix sum(ex.r, ex.r);
            for (int k = 0; k + j <= ex.m; ++k)
                sum = sum + ex.h[static_cast<std::size_t>(k)] *
                                ex.h[static_cast<std::size_t>(k + j)].t();
            CHECK(sum == ex.p[static_cast<std::size_t>(j)]);
        }
    }
}

TEST_CASE("exact verification of every entry, embedded where needed") {
    for (const Example& ex : corpus()) {
        CAPTURE(ex.id);
        const ExactEmbedding em = exact_embedding(ex);
        const ExactVerifyFlags flags = exact_verify(em.p0, em.p1, em.x, em.h0, em.h1);
        CHECK(flags.nme_ok);
        CHECK(flags.product_ok);
        CHECK(flags.cross_ok);
        CHECK(flags.cholesky_ok);
        CHECK(flags.all());
    }
    const Example unit = scalar_unit_normalization();
    const ExactEmbedding em = exact_embedding(unit);
    CHECK(exact_verify(em.p0, em.p1, em.x, em.h0, em.h1).all());
    CHECK(to_float(em.h0(0, 0)) == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("tampered data fails exact verification") {
    const Example& ex = example(3);
    ExactEmbedding em = exact_embedding(ex);
    em.x(0, 1) = surd_add(em.x(0, 1), surd_parse("1/1000000"));
    em.x(1, 0) = em.x(0, 1);
    const ExactVerifyFlags flags = exact_verify(em.p0, em.p1, em.x, em.h0, em.h1);
    CHECK_FALSE(flags.nme_ok);
    CHECK_FALSE(flags.cholesky_ok);
    CHECK(flags.product_ok);  // the factors themselves still multiply out
}

TEST_CASE("wavelet completions are exactly orthogonal") {
    for (int id : {4, 5}) {
        const Example& ex = example(id);
        REQUIRE(ex.g.size() == 2);
        const SurdMatrix eye = SurdMatrix::identity(ex.r);
        const SurdMatrix zero(ex.r, ex.r);
        CHECK(ex.g[0] * ex.g[0].t() + ex.g[1] * ex.g[1].t() == eye);
        CHECK(ex.h[0] * ex.g[0].t() + ex.h[1] * ex.g[1].t() == zero);
    }
}

TEST_CASE("float polynomial side: para-Hermitian and nonnegative on the circle") {
    for (const Example& ex : corpus()) {
        CAPTURE(ex.id);
        const MatLaurentPoly q = ex.laurent();
        CHECK(q.degree() == ex.m);
        CHECK(is_para_hermitian(q));
        const PsdReport psd = psd_on_circle(q);
        CHECK(psd.ok);
        CHECK(psd.min_eig > -1e-10);
    }
}

TEST_CASE("determinant zeros land where the corpus says") {
    for (const Example& ex : corpus()) {
        CAPTURE(ex.id);
        const CircleZeroReport rep = circle_zeros(det_poly(ex.laurent()));
        int on_total = 0;
        for (const CircleZero& z : rep.zeros)
            if (z.on_circle) on_total += z.multiplicity;
        int expect_total = 0;
        for (const CircleZeroSpec& spec : ex.circle_zeros_expected) {
            expect_total += spec.multiplicity;
            bool found = false;
            for (const CircleZero& z : rep.zeros) {
                if (std::hypot(z.location.re - spec.re, z.location.im) < 1e-4 &&
                    z.multiplicity == spec.multiplicity && z.on_circle)
                    found = true;
            }
            CHECK(found);
        }
        CHECK(on_total == expect_total);
    }

    // the banded entry keeps its zeros strictly off the circle, at 2 and 1/2
    const CircleZeroReport rep1 = circle_zeros(det_poly(example(1).laurent()));
    CHECK_FALSE(rep1.any_on_circle);
    bool at_two = false, at_half = false;
    for (const CircleZero& z : rep1.zeros) {
        if (std::hypot(z.location.re - 2.0, z.location.im) < 1e-8) at_two = true;
        if (std::hypot(z.location.re - 0.5, z.location.im) < 1e-8) at_half = true;
    }
    CHECK(at_two);
    CHECK(at_half);
}

TEST_CASE("closed-loop chain estimates match the stored metadata") {
    for (const Example& ex : corpus()) {
        CAPTURE(ex.id);
        const NmeProblem prob = ex.problem();
        const SingularityReport rep = singularity_report(to_dense(ex.x), prob.p1);
        CHECK(rep.p_estimate == ex.chain);
        if (ex.chain == 0) CHECK(rep.max_modulus < 0.9);
    }
}

TEST_CASE("float Newton lands on the exact solutions") {
    for (const Example& ex : corpus()) {
        CAPTURE(ex.id);
        const NmeProblem prob = ex.problem();
        const FactorResult res = newton_solve(prob);
        const DenseMatrix x_ref = to_dense(ex.x);
        if (ex.id == 1) {
            CHECK(res.status == SolveStatus::Converged);
            CHECK(res.iterations <= 8);
            CHECK(norm_max(res.x - x_ref) < 1e-12);
        } else if (ex.chain == 1) {
            CHECK(res.status == SolveStatus::Converged);
            CHECK(norm_max(res.x - x_ref) < 1e-5);
        } else if (ex.chain == 2) {
            // a length-2 chain floors the solution error near eps^(1/4)
            CHECK(res.status == SolveStatus::Converged);
            CHECK(norm_max(res.x - x_ref) < 2e-4);
        } else {
            // the length-5 chain is past double precision: no convergence,
            // but the iterate still lands near the exact solution
            CHECK(res.status != SolveStatus::Converged);
            CHECK(norm_max(res.x - x_ref) < 0.05);
        }
    }
}

TEST_CASE("float reference entries match high-precision values") {
    CHECK(to_dense(example(1).h[0])(0, 0) ==
          doctest::Approx(0.6859943405700353).epsilon(1e-15));
    CHECK(to_dense(example(5).x)(0, 1) ==
          doctest::Approx(0.4557189138830738).epsilon(1e-15));
    const DenseMatrix h5 = to_dense(example(5).h[0]);
    CHECK(h5(0, 0) == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(h5(1, 0) == doctest::Approx(0.6444838686433796).epsilon(1e-15));
    CHECK(h5(1, 1) == doctest::Approx(0.2909304780501058).epsilon(1e-14));
    CHECK(h5(0, 1) == 0.0);
}

TEST_CASE("embedded problem agrees with the float embedding") {
    const Example& ex = example(1);
    const NmeProblem prob = ex.problem();
    CHECK(prob.p0.rows() == 4);
    const ExactEmbedding em = exact_embedding(ex);
    CHECK(norm_max(prob.p0 - to_dense(em.p0)) < 1e-15);
    CHECK(norm_max(prob.p1 - to_dense(em.p1)) < 1e-15);
    // spot checks of the block layout
    CHECK(prob.p0(1, 1) == 9.0);    // P0 block on the diagonal
    CHECK(prob.p0(1, 3) == -2.0);   // P1 block above
    CHECK(prob.p0(3, 1) == -2.0);   // its mirror below
    CHECK(prob.p1(2, 0) == 0.0);    // P1 block, lower left
    CHECK(prob.p1(3, 1) == -2.0);
    CHECK(prob.p1(1, 0) == 2.0);    // P2 block on the diagonal (transposed storage)
    CHECK(prob.p1(0, 1) == 0.0);
}
