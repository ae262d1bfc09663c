#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msf/dense.hpp"

namespace msf {

// Newton correction system is numerically singular at the current iterate.
struct SingularJacobian : std::runtime_error {
    explicit SingularJacobian(const std::string& what) : std::runtime_error(what) {}
};

// one-lag factorization problem: find SPD X with X = P0 - P1^T X^{-1} P1
struct NmeProblem {
    DenseMatrix p0, p1;
    std::string label;
};

enum class SolveStatus { Converged, MaxIterations, Stalled, IndefiniteBreakdown };

std::string to_string(SolveStatus s);

struct SolverConfig {
    // residual threshold; negative selects 1e-13 * ||P0||_2
    double tol_residual = -1.0;
    // step threshold; negative selects machine eps * ||X_n||_2, re-evaluated
    // as the iterate moves
    double tol_step = -1.0;
    // iteration cap; negative selects the method default
    // (1e6 fixed-point, 200 Newton)
    long max_iter = -1;
    bool record_trace = true;
    // reference factor: enables the eps_h column of the trace
    std::optional<DenseMatrix> reference_h0;
};

struct TraceRecord {
    long n;
    double eps_p;      // ||f(X_n)||_2
    double eps_h;      // ||chol(X_n) - ref||_2, or -1 when unavailable
    double step_norm;  // ||X_{n+1} - X_n||_2
    double min_pivot;  // smallest Cholesky pivot of X_n (negative if indefinite)
};

struct IterationTrace {
    std::vector<TraceRecord> records;
};

struct FactorResult {
    DenseMatrix x, h0, h1;  // h0/h1 empty when extraction failed
    IterationTrace trace;
    SolveStatus status = SolveStatus::MaxIterations;
    long iterations = 0;
};

// f(X) = X - P0 + P1^T X^{-1} P1
DenseMatrix residual_f(const DenseMatrix& x, const NmeProblem& prob);

// one fixed-point update P0 - P1^T X^{-1} P1
DenseMatrix fpi_step(const DenseMatrix& x, const NmeProblem& prob);

// Fixed-point iteration from X_0 = P0. For the fixed-point map the
// residual norm coincides with the step norm, so the trace's eps_p
// column costs nothing extra. Long runs thin the trace geometrically
// (every iteration up to 2^14, then once per fixed fraction of a binade).
FactorResult fpi_solve(const NmeProblem& prob, const SolverConfig& cfg = {});

struct NewtonStep {
    DenseMatrix x_next;  // symmetrized X + dX
    double step_norm;    // ||dX||_2
};

// Solves [I - T (x) T] vec(dX) = -vec(f(X)) with T = P1^T X^{-1}
// and returns the symmetrized update.
NewtonStep newton_step(const DenseMatrix& x, const NmeProblem& prob);

// Newton iteration from X_0 = P0. Besides the shared stopping rules it
// stalls out when the running residual minimum fails to improve by 10%
// over 8 consecutive iterations (the plateau behaviour near singular
// factorizations).
FactorResult newton_solve(const NmeProblem& prob, const SolverConfig& cfg = {});

struct FactorPair {
    DenseMatrix h0, h1;
};

// H0 = chol(X), H1 = P1^T H0^{-T}
FactorPair extract_factors(const DenseMatrix& x, const NmeProblem& prob);

// factor-side residual: max of ||P0 - H0 H0^T - H1 H1^T||_2
// and ||P1 - H0 H1^T||_2
double metric_eps_p(const FactorPair& h, const NmeProblem& prob);

// ||H0 - reference||_2
double metric_eps_h(const DenseMatrix& h0, const DenseMatrix& reference_h0);

// congruence by L = chol(P0): X = L Y L^T turns the problem into
// Y = I - A~^T Y^{-1} A~ with A~ = L^{-1} P1 L^{-T}
struct SimplifiedForm {
    DenseMatrix a_tilde;  // contraction datum of the normalized problem
    DenseMatrix l;        // chol(P0), the back-substitution factor
};
SimplifiedForm to_simplified(const NmeProblem& prob);

// The plus-sign equation X = Q + A^T X^{-1} A reduces to the standard
// form Y = R - B^T Y^{-1} B via R = Q + A^T Q^{-1} A + A Q^{-1} A^T,
// B = A Q^{-1} A; the solution returns through X = Y - shift with
// shift = A Q^{-1} A^T.
struct StandardReduction {
    DenseMatrix r, b, shift;
};
StandardReduction modified_to_standard(const DenseMatrix& q, const DenseMatrix& a);

// solvability indicators of the one-lag problem
struct ExistenceReport {
    double necessary_value;   // spectral radius of P0^{-1} P1
    bool nec_ok;              // <= 1/2 (non-strict)
    double sufficient_value;  // ||P0^{-1}||_2 ||P1||_2
    bool suff_ok;             // < 1/2 (strict)
};
ExistenceReport existence_conditions(const NmeProblem& prob);

}  // namespace msf
