#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "msf/matpoly.hpp"

using namespace msf;

namespace {

MatLaurentPoly scalar_poly(const std::map<int, double>& c) {
    MatLaurentPoly p(1);
    for (const auto& [k, v] : c) p.set(k, DenseMatrix(1, 1, {v}));
    return p;
}

MatLaurentPoly random_para_hermitian(std::mt19937& rng, std::size_t dim, int deg) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatLaurentPoly p(dim);
    for (int k = 0; k <= deg; ++k) {
        DenseMatrix c(dim, dim);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j) c(i, j) = u(rng);
        if (k == 0) c = symmetrize(c);
        p.set(k, c);
        if (k > 0) p.set(-k, c.t());
    }
    return p;
}

}  // namespace

TEST_CASE("para conjugate and the para-Hermitian test") {
    MatLaurentPoly p(2);
    DenseMatrix a(2, 2, {1, 2, 3, 4});
    p.set(1, a);
    const MatLaurentPoly pc = para_conjugate(p);
    CHECK(norm_fro(pc.coeff(-1) - a.t()) == 0.0);
    CHECK(pc.coeff(1).rows() == 2);
    CHECK(norm_max(pc.coeff(1)) == 0.0);
    CHECK_FALSE(is_para_hermitian(p));

    p.set(-1, a.t());
    p.set(0, DenseMatrix(2, 2, {5, 1, 1, 5}));
    CHECK(is_para_hermitian(p));

    // a relative perturbation far above tol must be caught
    DenseMatrix bad = a.t();
    bad(0, 0) += 1e-6;
    p.set(-1, bad);
    CHECK_FALSE(is_para_hermitian(p));

    std::mt19937 rng(7301);
    for (int i = 0; i < 200; ++i) {
        const MatLaurentPoly q = random_para_hermitian(rng, 2 + i % 2, 1 + i % 3);
        REQUIRE(is_para_hermitian(q));
        const MatLaurentPoly qcc = para_conjugate(para_conjugate(q));
        for (int k = -q.degree(); k <= q.degree(); ++k)
            REQUIRE(norm_fro(qcc.coeff(k) - q.coeff(k)) == 0.0);
    }
}

TEST_CASE("evaluation on and off the circle") {
    const MatLaurentPoly p = scalar_poly({{-1, 1}, {0, 2}, {1, 1}});
    auto [re_i, im_i] = eval(p, {0.0, 1.0});  // z = i: i + 2 - i = 2
    CHECK(re_i(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(im_i(0, 0) == doctest::Approx(0.0));

    const double theta = 0.7;
    auto [re_t, im_t] = eval(p, {std::cos(theta), std::sin(theta)});
    CHECK(re_t(0, 0) == doctest::Approx(2.0 + 2.0 * std::cos(theta)).epsilon(1e-14));
    CHECK(std::abs(im_t(0, 0)) < 1e-15);

    auto [re_2, im_2] = eval(p, {2.0, 0.0});  // 2 + 2 + 1/2
    CHECK(re_2(0, 0) == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(im_2(0, 0) == 0.0);
}

TEST_CASE("positive semidefiniteness on the circle") {
    const PsdReport ok = psd_on_circle(scalar_poly({{-1, 1}, {0, 2}, {1, 1}}));
    CHECK(ok.ok);
    CHECK(ok.min_eig == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ok.theta_min == doctest::Approx(std::numbers::pi).epsilon(1e-12));

    const PsdReport bad = psd_on_circle(scalar_poly({{-1, 1}, {0, 1}, {1, 1}}));
    CHECK_FALSE(bad.ok);
    CHECK(bad.min_eig == doctest::Approx(-1.0).epsilon(1e-12));

    MatLaurentPoly eye(3);
    eye.set(0, DenseMatrix::identity(3));
    const PsdReport id = psd_on_circle(eye);
    CHECK(id.ok);
    CHECK(id.min_eig == doctest::Approx(1.0));

    // a factor product is automatically PSD on the circle
    std::mt19937 rng(7302);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        std::vector<DenseMatrix> h;
        for (int k = 0; k < 3; ++k) {
            DenseMatrix c(2, 2);
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b) c(a, b) = u(rng);
            h.push_back(c);
        }
        REQUIRE(psd_on_circle(factor_product(h), 128).ok);
    }
}

TEST_CASE("block embedding layout") {
    // scalar, degree 2: hat P0 = [[p0,p1],[p1,p0]], hat P1 = [[p2,0],[p1,p2]]
    const MatLaurentPoly p =
        scalar_poly({{-2, 1}, {-1, 2}, {0, 5}, {1, 2}, {2, 1}});
    const EmbeddedPair e = block_embed(p);
    REQUIRE(e.p0.rows() == 2);
    CHECK(e.p0(0, 0) == 5);
    CHECK(e.p0(0, 1) == 2);
    CHECK(e.p0(1, 0) == 2);
    CHECK(e.p0(1, 1) == 5);
    CHECK(e.p1(0, 0) == 1);
    CHECK(e.p1(0, 1) == 0);
    CHECK(e.p1(1, 0) == 2);
    CHECK(e.p1(1, 1) == 1);

    // degree 3: hat P1 is block lower triangular Toeplitz in p1..p3
    const MatLaurentPoly p3 = scalar_poly(
        {{-3, 1}, {-2, 2}, {-1, 3}, {0, 9}, {1, 3}, {2, 2}, {3, 1}});
    const EmbeddedPair e3 = block_embed(p3);
    REQUIRE(e3.p0.rows() == 3);
    CHECK(e3.p0(0, 2) == 2);
    CHECK(e3.p0(2, 0) == 2);
    CHECK(e3.p1(0, 0) == 1);
    CHECK(e3.p1(1, 0) == 2);
    CHECK(e3.p1(2, 0) == 3);
    CHECK(e3.p1(0, 1) == 0);
    CHECK(e3.p1(2, 2) == 1);

    // degree 1 embeds to itself
    MatLaurentPoly q(2);
    DenseMatrix q0(2, 2, {3, 2, 2, 3}), q1(2, 2, {1, 0, 2, 1});
    q.set(0, q0);
    q.set(1, q1);
    q.set(-1, q1.t());
    const EmbeddedPair e1 = block_embed(q);
    CHECK(norm_fro(e1.p0 - q0) == 0.0);
    CHECK(norm_fro(e1.p1 - q1) == 0.0);
}

TEST_CASE("block extraction with averaging") {
    // scalar factor h = (2, 1/2, 1/4)
    DenseMatrix h0(2, 2), h1(2, 2);
    h0(0, 0) = 2;
    h0(1, 1) = 2;
    h0(1, 0) = 0.5;
    h1(0, 0) = 0.25;
    h1(1, 1) = 0.25;
    h1(0, 1) = 0.5;
    const ExtractedFactors f = block_extract(h0, h1, 1);
    REQUIRE(f.h.size() == 3);
    CHECK(f.h[0](0, 0) == 2.0);
    CHECK(f.h[1](0, 0) == 0.5);
    CHECK(f.h[2](0, 0) == 0.25);
    CHECK(f.discrepancy == 0.0);

    // inconsistent repeats: beyond tol throws, looser tol averages
    DenseMatrix h1bad = h1;
    h1bad(0, 0) += 1e-3;
    CHECK_THROWS_AS(block_extract(h0, h1bad, 1), InconsistentBlocks);
    const ExtractedFactors g = block_extract(h0, h1bad, 1, 1e-2);
    CHECK(g.discrepancy == doctest::Approx(5e-4).epsilon(1e-6));
    CHECK(g.h[2](0, 0) == doctest::Approx(0.2505).epsilon(1e-12));
}

TEST_CASE("determinant interpolation") {
    // diagonal of two scalar factors: known product polynomial
    MatLaurentPoly p(2);
    DenseMatrix c0(2, 2), c1(2, 2);
    c0(0, 0) = 2;
    c0(1, 1) = 3;
    c1 = DenseMatrix::identity(2);
    p.set(0, c0);
    p.set(1, c1);
    p.set(-1, c1);
    const ScalarLaurentPoly q = det_poly(p);
    CHECK(q.coeff(-2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.coeff(-1) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(q.coeff(0) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(q.coeff(1) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(q.coeff(2) == doctest::Approx(1.0).epsilon(1e-12));

    // determinant of a product factor: (1 + w + w^2)(1 + z + z^2)
    std::vector<DenseMatrix> h = {DenseMatrix(2, 2, {1, 0, 1, 1}),
                                  DenseMatrix(2, 2, {1, 1, 0, 1})};
    const ScalarLaurentPoly qp = det_poly(factor_product(h));
    CHECK(qp.coeff(-2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qp.coeff(-1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(qp.coeff(0) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(qp.coeff(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(qp.coeff(2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(qp.min_index() == -2);
    CHECK(qp.max_index() == 2);
}

TEST_CASE("circle zeros: isolated, clustered, mixed") {
    // (1+z)^2 / z: double zero on the circle
    ScalarLaurentPoly q1;
    q1.coeffs = {{-1, 1}, {0, 2}, {1, 1}};
    const CircleZeroReport r1 = circle_zeros(q1);
    REQUIRE(r1.zeros.size() == 1);
    CHECK(r1.zeros[0].multiplicity == 2);
    CHECK(r1.zeros[0].on_circle);
    CHECK(r1.any_on_circle);
    CHECK(r1.zeros[0].location.re == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(std::abs(r1.zeros[0].location.im) < 1e-7);

    // -(z-2)(2z-1)/z: reciprocal pair off the circle
    ScalarLaurentPoly q2;
    q2.coeffs = {{-1, -2}, {0, 5}, {1, -2}};
    const CircleZeroReport r2 = circle_zeros(q2);
    REQUIRE(r2.zeros.size() == 2);
    CHECK_FALSE(r2.any_on_circle);
    CHECK(r2.zeros[0].location.re == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r2.zeros[1].location.re == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r2.zeros[0].multiplicity == 1);

    // (z+1)^2 (z-2)(z-1/2) / z^2: one circle cluster plus two isolated
    ScalarLaurentPoly q3;
    q3.coeffs = {{-2, 1}, {-1, -0.5}, {0, -3}, {1, -0.5}, {2, 1}};
    const CircleZeroReport r3 = circle_zeros(q3);
    REQUIRE(r3.zeros.size() == 3);
    CHECK(r3.any_on_circle);
    int on = 0;
    for (const auto& z : r3.zeros) on += z.on_circle ? 1 : 0;
    CHECK(on == 1);

    // (1+z)^10 / z^5: a tenfold circle zero must cluster to one centroid
    ScalarLaurentPoly q4;
    const double binom[11] = {1, 10, 45, 120, 210, 252, 210, 120, 45, 10, 1};
    for (int k = 0; k <= 10; ++k) q4.coeffs[k - 5] = binom[k];
    const CircleZeroReport r4 = circle_zeros(q4);
    REQUIRE(r4.zeros.size() == 1);
    CHECK(r4.zeros[0].multiplicity == 10);
    CHECK(r4.zeros[0].on_circle);
    CHECK(r4.zeros[0].location.re == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(std::abs(r4.zeros[0].location.im) < 1e-6);

    // constants have no zeros
    ScalarLaurentPoly q5;
    q5.coeffs = {{0, 3.0}};
    CHECK(circle_zeros(q5).zeros.empty());
}

TEST_CASE("factor product identities") {
    std::vector<DenseMatrix> h = {DenseMatrix(2, 2, {1, 0, 1, 1}),
                                  DenseMatrix(2, 2, {1, 1, 0, 1})};
    const MatLaurentPoly p = factor_product(h);
    CHECK(p.degree() == 1);
    CHECK(is_para_hermitian(p));
    const DenseMatrix p0 = p.coeff(0), p1 = p.coeff(1);
    CHECK(p0(0, 0) == 3);
    CHECK(p0(0, 1) == 2);
    CHECK(p1(0, 0) == 1);
    CHECK(p1(0, 1) == 0);
    CHECK(p1(1, 0) == 2);
    CHECK(norm_fro(p.coeff(-1) - p1.t()) == 0.0);

    // explicit zero coefficients do not raise the degree
    MatLaurentPoly padded = p;
    padded.set(3, DenseMatrix(2, 2));
    CHECK(padded.degree() == 1);
}
