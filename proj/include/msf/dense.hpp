#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace msf {

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct SingularSystem : std::runtime_error {
    explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by cholesky when a pivot falls at or below the pivot tolerance.
// pivot_index / pivot_value identify the offending diagonal step.
struct NotPositiveDefinite : std::runtime_error {
    std::size_t pivot_index;
    double pivot_value;
    NotPositiveDefinite(std::size_t index, double value)
        : std::runtime_error("matrix not positive definite at pivot " +
                             std::to_string(index)),
          pivot_index(index),
          pivot_value(value) {}
};

struct EigenFailure : std::runtime_error {
    explicit EigenFailure(const std::string& what) : std::runtime_error(what) {}
};

struct ComplexPair {
    double re = 0.0;
    double im = 0.0;
    double modulus() const;
};

// Row-major dense real matrix. Sizes are fixed at construction; all
// operations check dimensions and throw DimensionMismatch on disagreement.
class DenseMatrix {
  public:
    DenseMatrix() : rows_(0), cols_(0) {}
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    DenseMatrix t() const;

    DenseMatrix& operator+=(const DenseMatrix& rhs);
    DenseMatrix& operator-=(const DenseMatrix& rhs);
    DenseMatrix& operator*=(double s);

  private:
    std::size_t rows_, cols_;
    std::vector<double> a_;
};

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs);
DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs);
DenseMatrix operator*(double s, DenseMatrix m);
DenseMatrix operator*(DenseMatrix m, double s);

// (A + A^T)/2.
DenseMatrix symmetrize(const DenseMatrix& a);

// Lower-triangular L with L L^T = (A + A^T)/2. The input is symmetrized
// before factoring. pivot_tol < 0 selects the default 1e-14 * max diagonal.
DenseMatrix cholesky(const DenseMatrix& a, double pivot_tol = -1.0);

// Solves A X = B by LU with partial pivoting; B may have several columns.
DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix inverse(const DenseMatrix& a);

// Eigenvalues of a general real square matrix (balancing, Householder
// reduction to Hessenberg form, implicit double-shift QR). Dimension
// capped at 64; larger inputs throw DimensionMismatch.
std::vector<ComplexPair> eigenvalues(const DenseMatrix& a);

// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending order.
// Only the symmetric part of the input is consulted.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& a);

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);

// Column-stacking vec: entry (i,j) lands at position j*rows + i.
DenseMatrix vec_of(const DenseMatrix& a);
DenseMatrix unvec(const DenseMatrix& v, std::size_t rows, std::size_t cols);

double norm_fro(const DenseMatrix& a);
double norm_max(const DenseMatrix& a);
// Spectral norm: largest singular value, via the symmetric eigenvalues
// of A^T A (euclidean norm when the argument is a vector).
double norm_2(const DenseMatrix& a);
double spectral_radius(const DenseMatrix& a);

}  // namespace msf
