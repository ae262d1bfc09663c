#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "msf/dense.hpp"

using namespace msf;

namespace {

DenseMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DenseMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = u(rng);
    return m;
}

// companion matrix of z^n + c[0] z^{n-1} + ... + c[n-1]
DenseMatrix companion(const std::vector<double>& c) {
    const std::size_t n = c.size();
    DenseMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) m(0, j) = -c[j];
    for (std::size_t i = 1; i < n; ++i) m(i, i - 1) = 1.0;
    return m;
}

double trace(const DenseMatrix& a) {
    double t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

}  // namespace

TEST_CASE("cholesky on hand-checked matrices") {
    DenseMatrix a(2, 2, {4, 2, 2, 5});
    DenseMatrix l = cholesky(a);
    CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(l(0, 1) == 0.0);
    CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(l(1, 1) == doctest::Approx(2.0).epsilon(1e-15));

    DenseMatrix eye = DenseMatrix::identity(4);
    DenseMatrix leye = cholesky(eye);
    CHECK(norm_fro(leye - eye) == 0.0);

    // 2x2 with an irrational factor: A = L L^T, L = (sqrt2/8) [[4,0],[s7+1,s7-1]]
    const double s7 = std::sqrt(7.0), s2 = std::sqrt(2.0);
    DenseMatrix p0(2, 2, {0.5, (s7 + 1) / 8, (s7 + 1) / 8, 0.5});
    DenseMatrix l5 = cholesky(p0);
    CHECK(l5(0, 0) == doctest::Approx(s2 / 2).epsilon(1e-15));
    CHECK(l5(1, 0) == doctest::Approx(s2 * (s7 + 1) / 8).epsilon(1e-15));
    CHECK(l5(1, 1) == doctest::Approx(s2 * (s7 - 1) / 8).epsilon(1e-14));
}

TEST_CASE("cholesky rejects indefinite input with pivot details") {
    DenseMatrix a(2, 2, {1, 2, 2, 1});
    try {
        cholesky(a);
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.pivot_index == 1);
        CHECK(e.pivot_value == doctest::Approx(-3.0));
    }
    DenseMatrix zero(3, 3);
    CHECK_THROWS_AS(cholesky(zero), NotPositiveDefinite);
}

TEST_CASE("cholesky symmetrizes its input") {
    // asymmetric input whose symmetric part is [[4,2],[2,5]]
    DenseMatrix a(2, 2, {4, 3, 1, 5});
    DenseMatrix l = cholesky(a);
    CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("cholesky round trip on random SPD matrices") {
    std::mt19937 rng(7101);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t n = 1 + iter % 6;
        DenseMatrix l0 = random_matrix(rng, n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) l0(i, j) = 0.0;
            l0(i, i) = 0.5 + std::abs(l0(i, i));
        }
        DenseMatrix a = l0 * l0.t();
        DenseMatrix l = cholesky(a);
        REQUIRE(norm_fro(l * l.t() - a) <= 1e-12 * (1.0 + norm_fro(a)));
        REQUIRE(norm_fro(l - l0) <= 1e-10 * (1.0 + norm_fro(l0)));
    }
}

TEST_CASE("solve_linear and inverse") {
    DenseMatrix a(2, 2, {2, 1, 1, 3});
    DenseMatrix b(2, 1, {5, 10});
    DenseMatrix x = solve_linear(a, b);
    CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(x(1, 0) == doctest::Approx(3.0).epsilon(1e-14));

    std::mt19937 rng(7102);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t n = 1 + iter % 7;
        DenseMatrix m = random_matrix(rng, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) += 4.0;
        DenseMatrix id = DenseMatrix::identity(n);
        REQUIRE(norm_fro(m * inverse(m) - id) <= 1e-12);
        DenseMatrix rhs = random_matrix(rng, n, 3);
        REQUIRE(norm_fro(m * solve_linear(m, rhs) - rhs) <= 1e-12);
    }

    DenseMatrix sing(2, 2, {1, 2, 2, 4});
    CHECK_THROWS_AS(solve_linear(sing, DenseMatrix::identity(2)), SingularSystem);
}

TEST_CASE("symmetric eigenvalues on known matrices") {
    DenseMatrix d(3, 3);
    d(0, 0) = 3;
    d(1, 1) = 1;
    d(2, 2) = 2;
    auto ev = symmetric_eigenvalues(d);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(2.0));
    CHECK(ev[2] == doctest::Approx(3.0));

    DenseMatrix a(2, 2, {2, 1, 1, 2});
    ev = symmetric_eigenvalues(a);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("general eigenvalues on known matrices") {
    DenseMatrix rot(2, 2, {0, -1, 1, 0});
    auto ev = eigenvalues(rot);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].re == doctest::Approx(0.0));
    CHECK(std::abs(ev[0].im) == doctest::Approx(1.0));
    CHECK(ev[0].modulus() == doctest::Approx(1.0));

    // companion of (z-1)(z-2)(z-3) = z^3 - 6z^2 + 11z - 6
    DenseMatrix c = companion({-6, 11, -6});
    auto roots = eigenvalues(c);
    std::vector<double> re;
    for (auto& l : roots) {
        CHECK(std::abs(l.im) < 1e-8);
        re.push_back(l.re);
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(re[1] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(re[2] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("defective root cluster stays near its center") {
    // (z+1)^10: a 10-fold root perturbs like eps^(1/10); the cluster must
    // still sit well within 0.2 of -1
    std::vector<double> binom = {10, 45, 120, 210, 252, 210, 120, 45, 10, 1};
    auto roots = eigenvalues(companion(binom));
    REQUIRE(roots.size() == 10);
    double mean_re = 0.0, mean_im = 0.0;
    for (auto& l : roots) {
        CHECK(std::hypot(l.re + 1.0, l.im) < 0.2);
        mean_re += l.re / 10;
        mean_im += l.im / 10;
    }
    // the centroid cancels the first-order scatter
    CHECK(std::abs(mean_re + 1.0) < 1e-6);
    CHECK(std::abs(mean_im) < 1e-6);
}

TEST_CASE("eigenvalue dimension cap") {
    DenseMatrix big(65, 65);
    CHECK_THROWS_AS(eigenvalues(big), DimensionMismatch);
}

TEST_CASE("eigenvalues agree with Jacobi on random symmetric matrices") {
    std::mt19937 rng(7103);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t n = 2 + iter % 5;
        DenseMatrix s = symmetrize(random_matrix(rng, n, n));
        auto ej = symmetric_eigenvalues(s);
        auto eg = eigenvalues(s);
        REQUIRE(eg.size() == n);
        std::vector<double> re;
        for (auto& l : eg) {
            REQUIRE(std::abs(l.im) < 1e-7);
            re.push_back(l.re);
        }
        std::sort(re.begin(), re.end());
        for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(re[i] - ej[i]) < 1e-8);
    }
}

TEST_CASE("eigenvalue sum matches trace on random matrices") {
    std::mt19937 rng(7104);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t n = 2 + iter % 6;
        DenseMatrix a = random_matrix(rng, n, n);
        auto ev = eigenvalues(a);
        REQUIRE(ev.size() == n);
        double sr = 0.0, si = 0.0;
        for (auto& l : ev) {
            sr += l.re;
            si += l.im;
        }
        REQUIRE(std::abs(sr - trace(a)) < 1e-10 * (1.0 + std::abs(trace(a))));
        REQUIRE(std::abs(si) < 1e-10);
    }
}

TEST_CASE("kron and column-stacking vec identity") {
    DenseMatrix a(2, 2, {1, 2, 3, 4});
    DenseMatrix v = vec_of(a);
    CHECK(v(0, 0) == 1);
    CHECK(v(1, 0) == 3);
    CHECK(v(2, 0) == 2);
    CHECK(v(3, 0) == 4);
    CHECK(norm_fro(unvec(v, 2, 2) - a) == 0.0);

    // vec(A X B) = (B^T (x) A) vec(X)
    std::mt19937 rng(7105);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t p = 1 + iter % 3, q = 1 + (iter / 3) % 3,
                          r = 1 + (iter / 9) % 3, s = 1 + (iter / 27) % 3;
        DenseMatrix A = random_matrix(rng, p, q);
        DenseMatrix X = random_matrix(rng, q, r);
        DenseMatrix B = random_matrix(rng, r, s);
        DenseMatrix lhs = vec_of(A * X * B);
        DenseMatrix rhs = kron(B.t(), A) * vec_of(X);
        REQUIRE(norm_fro(lhs - rhs) <= 1e-13 * (1.0 + norm_fro(lhs)));
    }
}

TEST_CASE("kron of explicit small matrices") {
    DenseMatrix a(2, 2, {1, 2, 3, 4});
    DenseMatrix b(2, 2, {0, 1, 1, 0});
    DenseMatrix k = kron(a, b);
    CHECK(k.rows() == 4);
    CHECK(k(0, 1) == 1);
    CHECK(k(0, 3) == 2);
    CHECK(k(3, 0) == 3);
    CHECK(k(2, 3) == 4);
}

TEST_CASE("norms") {
    DenseMatrix a(2, 2, {3, 0, 0, -4});
    CHECK(norm_fro(a) == doctest::Approx(5.0));
    CHECK(norm_max(a) == doctest::Approx(4.0));
    CHECK(norm_2(a) == doctest::Approx(4.0).epsilon(1e-12));

    // rank one: ||u v^T||_2 = ||u|| ||v||
    DenseMatrix u(3, 1, {1, 2, 2});
    DenseMatrix v(1, 2, {3, 4});
    CHECK(norm_2(u * v) == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(norm_2(u) == doctest::Approx(3.0));

    DenseMatrix c = companion({-0.75, 0.125});  // roots 1/2 and 1/4
    CHECK(spectral_radius(c) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("matrix arithmetic") {
    DenseMatrix a(2, 3, {1, 2, 3, 4, 5, 6});
    DenseMatrix at = a.t();
    CHECK(at.rows() == 3);
    CHECK(at(2, 1) == 6);
    DenseMatrix s = a + a - a;
    CHECK(norm_fro(s - a) == 0.0);
    DenseMatrix twoa = 2.0 * a;
    CHECK(twoa(1, 2) == 12.0);
    CHECK_THROWS_AS(a + at, DimensionMismatch);
    CHECK_THROWS_AS(a * a, DimensionMismatch);

    DenseMatrix m(2, 2, {1, 5, 3, 2});
    DenseMatrix sym = symmetrize(m);
    CHECK(sym(0, 1) == 4.0);
    CHECK(sym(1, 0) == 4.0);
}
