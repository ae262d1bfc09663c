#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "msf/dense.hpp"
#include "msf/matpoly.hpp"
#include "msf/nme.hpp"

namespace msf {

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RateClass { Quadratic, Linear, Sublinear, Stalled, Inconclusive };

std::string to_string(RateClass c);

// Fitted convergence behaviour of an error sequence e(n) > 0.
//   Linear:     e(n) ~ C * factor^n, factor < 0.95
//   Sublinear:  e(n) ~ C / (n+1)^power
//   Quadratic:  log e(n+1) = 2 log e(n) + log factor (consecutive n only)
// window [n_first, n_last] is the fitted range after plateau trimming;
// fit_residual is the rms residual of the winning fit divided by the
// spread of log e over the window.
struct RateEstimate {
    RateClass cls = RateClass::Inconclusive;
    double factor = 0.0;
    double power = 0.0;
    long n_first = 0;
    long n_last = 0;
    std::size_t points = 0;
    double fit_residual = 0.0;
};

struct RatePoint {
    long n;
    double e;
};

// Classify the decay of an error sequence. Entries before burn_in are
// ignored; at least 8 must remain or InsufficientData is thrown. The fit
// window ends at the first sign of a noise floor: either five recorded
// steps bring no relative progress, or the error rises above 1.5x its
// running minimum. Fewer than 3 surviving points classifies as Stalled.
RateEstimate estimate_rate(const std::vector<RatePoint>& errors, std::size_t burn_in = 0);

// Error sequences pulled out of a solver trace (nonpositive entries dropped).
std::vector<RatePoint> series_eps_p(const IterationTrace& trace);
std::vector<RatePoint> series_eps_h(const IterationTrace& trace);
std::vector<RatePoint> series_step(const IterationTrace& trace);

// Newton's method contracts errors by 2^(-1/p) when the underlying
// singular eigenvalue sits in a size-p chain.
double expected_newton_factor(int p);

// Closed-loop matrix X^{-1} P1 whose spectrum governs both iterations.
DenseMatrix closed_loop(const DenseMatrix& x, const DenseMatrix& p1);

// Spectrum of the closed loop split by distance from the unit circle.
// inside/on_circle/outside use the strict circle_tol; p_estimate uses the
// coarser cluster_radius both radially and for location clustering, since
// a defective eigenvalue of multiplicity p scatters like eps^(1/p).
struct SingularityReport {
    std::vector<ComplexPair> eigenvalues;
    double max_modulus = 0.0;
    std::size_t inside = 0;
    std::size_t on_circle = 0;
    std::size_t outside = 0;
    int p_estimate = 0;
};

SingularityReport singularity_report(const DenseMatrix& x, const DenseMatrix& p1,
                                     double circle_tol = 1e-6,
                                     double cluster_radius = 0.05);

// Pencil (M, N) attached to the equation X = P0 - P1^T X^{-1} P1:
//   M = [ 0   0   I  ]      N = [ I  0  0 ]
//       [ P0  I  -P1^T]         [ 0  0  0 ]
//       [ P1  0   0  ]          [ 0 -I  0 ]
// Its finite eigenvalues come in (lambda, 1/lambda) pairs and contain the
// closed-loop spectrum of the maximal solution.
struct PencilPair {
    DenseMatrix m;
    DenseMatrix n;
};

PencilPair gdare_pencil(const NmeProblem& prob);

struct PencilReport {
    std::vector<CircleZero> zeros;  // clustered finite eigenvalues
    std::size_t finite = 0;         // with multiplicity
    std::size_t inside = 0;
    std::size_t on_circle = 0;
    std::size_t outside = 0;
    double max_modulus = 0.0;
};

PencilReport pencil_unit_circle_report(const PencilPair& pencil,
                                       double circle_tol = 1e-6);

}  // namespace msf
