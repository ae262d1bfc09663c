#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "msf/dense.hpp"

namespace msf {

using BigRational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Requested value has no representation in a real multi-quadratic field
// (or would need a generator beyond the supported factoring range).
struct NotRepresentable : std::runtime_error {
    explicit NotRepresentable(const std::string& what) : std::runtime_error(what) {}
};

struct SurdParseError : std::runtime_error {
    explicit SurdParseError(const std::string& what) : std::runtime_error(what) {}
};

// Element of Q(sqrt(p1), ..., sqrt(pk)) for distinct primes p1 < ... < pk:
// a finite sum of terms c * sqrt(prod of a prime subset) with rational c.
// Canonical form: generator list sorted, only primes used by some nonzero
// term are kept, no zero coefficients stored. Zero is the empty sum.
class SurdElem {
  public:
    SurdElem() = default;

    // mask bit i refers to generators()[i]
    const std::vector<long long>& generators() const { return primes_; }
    const std::map<std::uint32_t, BigRational>& terms() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_rational() const;
    // rational part (coefficient of the empty radical)
    BigRational rational_part() const;

    bool operator==(const SurdElem& rhs) const;
    bool operator!=(const SurdElem& rhs) const { return !(*this == rhs); }

    // raw constructor used by the arithmetic kernels; normalizes
    SurdElem(std::vector<long long> primes, std::map<std::uint32_t, BigRational> coeffs);

  private:
    std::vector<long long> primes_;
    std::map<std::uint32_t, BigRational> coeffs_;
    void normalize();
};

SurdElem surd_from_rational(const BigRational& q);
SurdElem surd_add(const SurdElem& a, const SurdElem& b);
SurdElem surd_neg(const SurdElem& a);
SurdElem surd_sub(const SurdElem& a, const SurdElem& b);
SurdElem surd_mul(const SurdElem& a, const SurdElem& b);
// exact inverse by iterated conjugation; throws std::domain_error on zero
SurdElem surd_inv(const SurdElem& a);
SurdElem surd_div(const SurdElem& a, const SurdElem& b);

// exact sign: -1, 0, +1
int surd_sign(const SurdElem& a);

// exact square root within the multi-quadratic tower. Handles rationals
// (extending the field by at most one squarefree radical), and two-term
// elements u + v*sqrt(D) via denesting when u^2 - v^2 D is a rational
// square. Anything else throws NotRepresentable.
SurdElem surd_sqrt(const SurdElem& a);

// expression grammar: integers, sN (sqrt of N), + - * /, parentheses,
// unary minus; e.g. "(1+s7)/8", "(s14-s2)/8", "-3/2"
SurdElem surd_parse(const std::string& text);

// double value, correct to within a few ulp (long double accumulation)
double to_float(const SurdElem& a);

std::string to_string(const SurdElem& a);

inline SurdElem operator+(const SurdElem& a, const SurdElem& b) { return surd_add(a, b); }
inline SurdElem operator-(const SurdElem& a, const SurdElem& b) { return surd_sub(a, b); }
inline SurdElem operator-(const SurdElem& a) { return surd_neg(a); }
inline SurdElem operator*(const SurdElem& a, const SurdElem& b) { return surd_mul(a, b); }
inline SurdElem operator/(const SurdElem& a, const SurdElem& b) { return surd_div(a, b); }

// Dense matrix over SurdElem, row-major. Entries may live in different
// subfields; operations merge fields termwise.
class SurdMatrix {
  public:
    SurdMatrix() : rows_(0), cols_(0) {}
    SurdMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static SurdMatrix identity(std::size_t n);
    // entries as expression strings, row-major
    static SurdMatrix parse(std::size_t rows, std::size_t cols,
                            const std::vector<std::string>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    SurdElem& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const SurdElem& operator()(std::size_t i, std::size_t j) const {
        return a_[i * cols_ + j];
    }

    SurdMatrix t() const;
    bool operator==(const SurdMatrix& rhs) const;
    bool operator!=(const SurdMatrix& rhs) const { return !(*this == rhs); }

  private:
    std::size_t rows_, cols_;
    std::vector<SurdElem> a_;
};

SurdMatrix operator+(const SurdMatrix& a, const SurdMatrix& b);
SurdMatrix operator-(const SurdMatrix& a, const SurdMatrix& b);
SurdMatrix operator*(const SurdMatrix& a, const SurdMatrix& b);
SurdMatrix operator*(const SurdElem& s, const SurdMatrix& m);

// exact Gauss-Jordan inverse; throws SingularSystem on exact singularity
SurdMatrix exact_inverse(const SurdMatrix& a);

// exact lower Cholesky factor; pivot signs decided exactly, diagonal
// square roots may extend the field. Throws NotPositiveDefinite (the
// reported pivot value is the float image of the exact pivot).
SurdMatrix exact_cholesky(const SurdMatrix& x);

// maximal solution of x = p0 - p1^2 / x, i.e. the larger root of
// x^2 - p0 x + p1^2 = 0; the discriminant square root must denest
SurdElem exact_scalar_solve(const SurdElem& p0, const SurdElem& p1);

struct ExactVerifyFlags {
    bool nme_ok = false;       // X = P0 - P1^T X^{-1} P1
    bool product_ok = false;   // P0 = H0 H0^T + H1 H1^T  and  P1 = H0 H1^T
    bool cross_ok = false;     // H0 H1^T = P1 (factor cross identity)
    bool cholesky_ok = false;  // H0 lower triangular, positive diagonal, H0 H0^T = X
    bool all() const { return nme_ok && product_ok && cross_ok && cholesky_ok; }
};

// zero-tolerance verification of a one-lag factorization
ExactVerifyFlags exact_verify(const SurdMatrix& p0, const SurdMatrix& p1,
                              const SurdMatrix& x, const SurdMatrix& h0,
                              const SurdMatrix& h1);

DenseMatrix to_dense(const SurdMatrix& a);

}  // namespace msf
