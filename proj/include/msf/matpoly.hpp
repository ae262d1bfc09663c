#pragma once

#include <map>
#include <utility>
#include <vector>

#include "msf/dense.hpp"

namespace msf {

// Thrown by block_extract when repeated blocks of a banded factor
// disagree beyond the requested tolerance.
struct InconsistentBlocks : std::runtime_error {
    double discrepancy;
    explicit InconsistentBlocks(double d)
        : std::runtime_error("repeated blocks disagree"), discrepancy(d) {}
};

// Laurent polynomial with square real matrix coefficients,
// P(z) = sum_k C_k z^k over a finite symmetric index band.
class MatLaurentPoly {
  public:
    MatLaurentPoly() : dim_(0) {}
    explicit MatLaurentPoly(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    // largest |k| carrying a nonzero coefficient
    int degree() const;
    void set(int k, DenseMatrix c);
    // zero matrix when the index is absent
    DenseMatrix coeff(int k) const;
    const std::map<int, DenseMatrix>& table() const { return coeffs_; }

  private:
    std::size_t dim_;
    std::map<int, DenseMatrix> coeffs_;
};

// scalar Laurent polynomial q(z) = sum_k c_k z^k
struct ScalarLaurentPoly {
    std::map<int, double> coeffs;
    double coeff(int k) const;
    int min_index() const;
    int max_index() const;
};

// P~(z) = P(1/z)^T, coefficientwise C_k -> C_{-k}^T
MatLaurentPoly para_conjugate(const MatLaurentPoly& p);

// relative coefficientwise check of P = P~
bool is_para_hermitian(const MatLaurentPoly& p, double tol = 1e-12);

// value at a complex point, as (real part, imaginary part)
std::pair<DenseMatrix, DenseMatrix> eval(const MatLaurentPoly& p, ComplexPair z);

struct PsdReport {
    bool ok = false;
    double min_eig = 0.0;   // smallest eigenvalue seen over the samples
    double theta_min = 0.0; // angle attaining it
};

// samples P(e^{i theta}) on a uniform grid; each Hermitian value A + iB
// is tested through its symmetric real embedding [[A,-B],[B,A]]
PsdReport psd_on_circle(const MatLaurentPoly& p, std::size_t samples = 512,
                        double tol = 1e-10);

// Block one-lag embedding of a degree-m polynomial into dimension r*m:
// hat P0 block (i,j) = C_{j-i}, hat P1 block (i,j) = C_{m+j-i}.
struct EmbeddedPair {
    DenseMatrix p0, p1;
};
EmbeddedPair block_embed(const MatLaurentPoly& p);

// Inverse of the embedding for factors: reads H_0..H_m out of the block
// factor pair, averaging repeated blocks. discrepancy is the largest
// deviation of one occurrence from its block mean; above tol it throws.
struct ExtractedFactors {
    std::vector<DenseMatrix> h;
    double discrepancy = 0.0;
};
ExtractedFactors block_extract(const DenseMatrix& h0_hat, const DenseMatrix& h1_hat,
                               std::size_t r, double tol = 1e-6);

// Determinant det P(z) as a scalar Laurent polynomial, interpolated on
// roots of unity and inverted by DFT; coefficients below
// interp_tol * max are dropped.
ScalarLaurentPoly det_poly(const MatLaurentPoly& p, double interp_tol = 1e-10);

struct CircleZero {
    ComplexPair location;  // cluster centroid
    int multiplicity;      // cluster size
    bool on_circle;
};
struct CircleZeroReport {
    std::vector<CircleZero> zeros;
    bool any_on_circle = false;
};

// Zeros of a scalar Laurent polynomial in the punctured plane, from the
// companion matrix of z^{-min} q(z). Nearby roots are merged by
// single-linkage with radius max(cluster_tol, 6 eps^(1/deg)): a cluster
// of a d-fold root scatters like eps^(1/d) but its centroid cancels the
// first-order error, so centroids are compared against the unit circle.
CircleZeroReport circle_zeros(const ScalarLaurentPoly& q, double circle_tol = 1e-6,
                              double cluster_tol = 1e-4);

// P(z) = H(z) H(1/z)^T for the causal factor H(z) = sum_k h[k] z^{-k},
// i.e. coefficient P_j = sum_k h[k] h[k+j]^T
MatLaurentPoly factor_product(const std::vector<DenseMatrix>& h);

}  // namespace msf
