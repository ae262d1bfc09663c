#include "msf/nme.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace msf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// spectral norm of a symmetric matrix, closed forms for the hot sizes
double sym_norm2(const DenseMatrix& s) {
    const std::size_t n = s.rows();
    if (n == 1) return std::abs(s(0, 0));
    if (n == 2) {
        const double mean = 0.5 * (s(0, 0) + s(1, 1));
        const double disc = std::hypot(0.5 * (s(0, 0) - s(1, 1)), s(0, 1));
        return std::max(std::abs(mean + disc), std::abs(mean - disc));
    }
    const std::vector<double> ev = symmetric_eigenvalues(s);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

double resolve_tol_residual(const SolverConfig& cfg, const NmeProblem& prob) {
    return cfg.tol_residual >= 0.0 ? cfg.tol_residual
                                   : 1e-13 * sym_norm2(symmetrize(prob.p0));
}

// thin long traces: every step up to 2^14, then 2^13 records per binade
bool record_now(long n) {
    if (n < 16384) return true;
    const int b = std::bit_width(static_cast<unsigned long long>(n)) - 1;
    const long stride = 1L << (b - 13);
    return (n & (stride - 1)) == 0;
}

// flat-array Cholesky; returns false on a pivot at or below tol and
// always reports the smallest pivot seen
bool chol_flat(const double* x, double* l, std::size_t r, double& min_pivot) {
    double maxdiag = 0.0;
    for (std::size_t i = 0; i < r; ++i) maxdiag = std::max(maxdiag, std::abs(x[i * r + i]));
    const double tol = 1e-14 * maxdiag;
    min_pivot = std::numeric_limits<double>::infinity();
    std::fill(l, l + r * r, 0.0);
    for (std::size_t j = 0; j < r; ++j) {
        double d = x[j * r + j];
        for (std::size_t k = 0; k < j; ++k) d -= l[j * r + k] * l[j * r + k];
        min_pivot = std::min(min_pivot, d);
        if (d <= tol) return false;
        const double root = std::sqrt(d);
        l[j * r + j] = root;
        for (std::size_t i = j + 1; i < r; ++i) {
            double v = x[i * r + j];
            for (std::size_t k = 0; k < j; ++k) v -= l[i * r + k] * l[j * r + k];
            l[i * r + j] = v / root;
        }
    }
    return true;
}

// forward substitution L Y = B for square B, all flat row-major
void fsolve_flat(const double* l, const double* b, double* y, std::size_t r) {
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < r; ++i) {
            double v = b[i * r + j];
            for (std::size_t k = 0; k < i; ++k) v -= l[i * r + k] * y[k * r + j];
            y[i * r + j] = v / l[i * r + i];
        }
}

// spectral norm of the symmetric difference of two flat matrices
double diff_norm2_flat(const double* a, const double* b, std::size_t r) {
    if (r == 1) return std::abs(a[0] - b[0]);
    if (r == 2) {
        const double d00 = a[0] - b[0], d01 = a[1] - b[1], d11 = a[3] - b[3];
        const double mean = 0.5 * (d00 + d11);
        const double disc = std::hypot(0.5 * (d00 - d11), d01);
        return std::max(std::abs(mean + disc), std::abs(mean - disc));
    }
    DenseMatrix d(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) d(i, j) = a[i * r + j] - b[i * r + j];
    return sym_norm2(d);
}

double norm2_flat(const double* a, std::size_t r) {
    if (r == 1) return std::abs(a[0]);
    if (r == 2) {
        const double mean = 0.5 * (a[0] + a[3]);
        const double disc = std::hypot(0.5 * (a[0] - a[3]), a[1]);
        return std::max(std::abs(mean + disc), std::abs(mean - disc));
    }
    DenseMatrix d(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) d(i, j) = a[i * r + j];
    return sym_norm2(d);
}

DenseMatrix from_flat(const double* a, std::size_t r) {
    DenseMatrix m(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) m(i, j) = a[i * r + j];
    return m;
}

void check_problem(const NmeProblem& prob) {
    if (prob.p0.rows() != prob.p0.cols() || prob.p1.rows() != prob.p1.cols() ||
        prob.p0.rows() != prob.p1.rows())
        throw DimensionMismatch("problem matrices must be square and same size");
}

}  // namespace

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIterations: return "max-iterations";
        case SolveStatus::Stalled: return "stalled";
        case SolveStatus::IndefiniteBreakdown: return "indefinite-breakdown";
    }
    return "unknown";
}

DenseMatrix residual_f(const DenseMatrix& x, const NmeProblem& prob) {
    return x - prob.p0 + prob.p1.t() * solve_linear(x, prob.p1);
}

DenseMatrix fpi_step(const DenseMatrix& x, const NmeProblem& prob) {
    return prob.p0 - prob.p1.t() * solve_linear(x, prob.p1);
}

FactorResult fpi_solve(const NmeProblem& prob, const SolverConfig& cfg) {
    check_problem(prob);
    const std::size_t r = prob.p0.rows();
    const double tol_res = resolve_tol_residual(cfg, prob);
    const long max_iter = cfg.max_iter >= 0 ? cfg.max_iter : 1000000L;

    FactorResult out;
    std::vector<double> x(r * r), xn(r * r), l(r * r), y(r * r), p0(r * r), p1(r * r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            p0[i * r + j] = 0.5 * (prob.p0(i, j) + prob.p0(j, i));
            p1[i * r + j] = prob.p1(i, j);
        }
    x = p0;  // X_0 = P0

    const bool want_eps_h = cfg.reference_h0.has_value();
    long last_recorded = -1;
    auto push = [&](long n, double eps_p, double eps_h, double step, double pivot) {
        out.trace.records.push_back({n, eps_p, eps_h, step, pivot});
        last_recorded = n;
    };

    out.status = SolveStatus::MaxIterations;
    long n = 0;
    for (; n < max_iter; ++n) {
        double min_pivot;
        const bool pd = chol_flat(x.data(), l.data(), r, min_pivot);
        if (!pd) {
            if (cfg.record_trace) push(n, -1.0, -1.0, 0.0, min_pivot);
            out.status = SolveStatus::IndefiniteBreakdown;
            break;
        }
        // X_{n+1} = P0 - (L^{-1} P1)^T (L^{-1} P1)
        fsolve_flat(l.data(), p1.data(), y.data(), r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i; j < r; ++j) {
                double v = p0[i * r + j];
                for (std::size_t k = 0; k < r; ++k) v -= y[k * r + i] * y[k * r + j];
                xn[i * r + j] = v;
                xn[j * r + i] = v;
            }
        // for the fixed-point map f(X_n) = X_n - X_{n+1}
        const double step = diff_norm2_flat(xn.data(), x.data(), r);
        const double eps_p = step;

        const bool rec = cfg.record_trace && record_now(n);
        if (rec) {
            double eps_h = -1.0;
            if (want_eps_h) eps_h = norm_2(from_flat(l.data(), r) - *cfg.reference_h0);
            push(n, eps_p, eps_h, step, min_pivot);
        }

        const double tol_step_eff =
            cfg.tol_step >= 0.0 ? cfg.tol_step : kEps * norm2_flat(x.data(), r);
        x.swap(xn);
        if (eps_p <= tol_res) {
            out.status = SolveStatus::Converged;
            ++n;
            break;
        }
        if (step <= tol_step_eff) {
            out.status = SolveStatus::Stalled;
            ++n;
            break;
        }
        if (cfg.record_trace && !rec && n + 1 == max_iter) push(n, eps_p, -1.0, step, min_pivot);
    }
    out.iterations = n;
    out.x = from_flat(x.data(), r);
    try {
        const FactorPair h = extract_factors(out.x, prob);
        out.h0 = h.h0;
        out.h1 = h.h1;
    } catch (const NotPositiveDefinite&) {
        // leave factors empty; the status already reflects the breakdown
    }
    return out;
}

NewtonStep newton_step(const DenseMatrix& x, const NmeProblem& prob) {
    check_problem(prob);
    const std::size_t r = x.rows();
    DenseMatrix t;
    DenseMatrix f;
    try {
        const DenseMatrix xinv_p1 = solve_linear(x, prob.p1);
        t = xinv_p1.t();  // T = P1^T X^{-1}
        f = x - prob.p0 + t * prob.p1;
    } catch (const SingularSystem&) {
        throw SingularJacobian("iterate is singular");
    }
    const std::size_t n2 = r * r;
    DenseMatrix jac = DenseMatrix::identity(n2) - kron(t, t);
    DenseMatrix dx;
    try {
        dx = unvec(solve_linear(jac, -1.0 * vec_of(f)), r, r);
    } catch (const SingularSystem&) {
        throw SingularJacobian("Newton correction system is singular");
    }
    NewtonStep s;
    s.step_norm = norm_2(dx);
    s.x_next = symmetrize(x + dx);
    return s;
}

FactorResult newton_solve(const NmeProblem& prob, const SolverConfig& cfg) {
    check_problem(prob);
    const std::size_t r = prob.p0.rows();
    const double tol_res = resolve_tol_residual(cfg, prob);
    const long max_iter = cfg.max_iter >= 0 ? cfg.max_iter : 200L;

    FactorResult out;
    out.x = symmetrize(prob.p0);
    out.status = SolveStatus::MaxIterations;

    double best = std::numeric_limits<double>::infinity();
    int no_improve = 0;
    long n = 0;
    std::vector<double> lwork(r * r), xwork(r * r);
    for (; n < max_iter; ++n) {
        double eps_p;
        DenseMatrix f;
        try {
            f = residual_f(out.x, prob);
        } catch (const SingularSystem&) {
            out.status = SolveStatus::IndefiniteBreakdown;
            break;
        }
        eps_p = sym_norm2(f);

        double min_pivot, eps_h = -1.0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) xwork[i * r + j] = out.x(i, j);
        const bool pd = chol_flat(xwork.data(), lwork.data(), r, min_pivot);
        if (pd && cfg.reference_h0)
            eps_h = norm_2(from_flat(lwork.data(), r) - *cfg.reference_h0);

        if (eps_p <= tol_res) {
            if (cfg.record_trace) out.trace.records.push_back({n, eps_p, eps_h, 0.0, min_pivot});
            out.status = SolveStatus::Converged;
            break;
        }
        // plateau rule: the running residual minimum must keep improving
        if (eps_p > 0.9 * best) {
            if (++no_improve >= 8) {
                if (cfg.record_trace)
                    out.trace.records.push_back({n, eps_p, eps_h, 0.0, min_pivot});
                out.status = SolveStatus::Stalled;
                break;
            }
        } else {
            no_improve = 0;
        }
        best = std::min(best, eps_p);

        NewtonStep s;
        try {
            s = newton_step(out.x, prob);
        } catch (const SingularJacobian&) {
            if (cfg.record_trace) out.trace.records.push_back({n, eps_p, eps_h, 0.0, min_pivot});
            out.status = SolveStatus::IndefiniteBreakdown;
            break;
        }
        if (cfg.record_trace)
            out.trace.records.push_back({n, eps_p, eps_h, s.step_norm, min_pivot});

        const double tol_step_eff =
            cfg.tol_step >= 0.0 ? cfg.tol_step : kEps * sym_norm2(out.x);
        out.x = s.x_next;
        if (s.step_norm <= tol_step_eff) {
            out.status = SolveStatus::Stalled;
            ++n;
            break;
        }
    }
    out.iterations = n;
    try {
        const FactorPair h = extract_factors(out.x, prob);
        out.h0 = h.h0;
        out.h1 = h.h1;
    } catch (const NotPositiveDefinite&) {
        if (out.status == SolveStatus::MaxIterations || out.status == SolveStatus::Stalled)
            out.status = SolveStatus::IndefiniteBreakdown;
    }
    return out;
}

FactorPair extract_factors(const DenseMatrix& x, const NmeProblem& prob) {
    FactorPair p;
    p.h0 = cholesky(x);
    p.h1 = solve_linear(p.h0, prob.p1).t();  // H1^T = H0^{-1} P1
    return p;
}

double metric_eps_p(const FactorPair& h, const NmeProblem& prob) {
    const double e0 = norm_2(prob.p0 - h.h0 * h.h0.t() - h.h1 * h.h1.t());
    const double e1 = norm_2(prob.p1 - h.h0 * h.h1.t());
    return std::max(e0, e1);
}

double metric_eps_h(const DenseMatrix& h0, const DenseMatrix& reference_h0) {
    return norm_2(h0 - reference_h0);
}

SimplifiedForm to_simplified(const NmeProblem& prob) {
    check_problem(prob);
    SimplifiedForm s;
    s.l = cholesky(prob.p0);
    const DenseMatrix v = solve_linear(s.l, prob.p1);      // L^{-1} P1
    s.a_tilde = solve_linear(s.l, v.t()).t();              // (L^{-1} (L^{-1}P1)^T)^T
    return s;
}

StandardReduction modified_to_standard(const DenseMatrix& q, const DenseMatrix& a) {
    if (q.rows() != q.cols() || a.rows() != a.cols() || q.rows() != a.rows())
        throw DimensionMismatch("reduction needs square matrices of equal size");
    StandardReduction red;
    const DenseMatrix qinv_a = solve_linear(q, a);        // Q^{-1} A
    const DenseMatrix qinv_at = solve_linear(q, a.t());   // Q^{-1} A^T
    red.shift = a * qinv_at;                              // A Q^{-1} A^T
    red.r = q + a.t() * qinv_a + red.shift;
    red.b = a * qinv_a;                                   // A Q^{-1} A
    return red;
}

ExistenceReport existence_conditions(const NmeProblem& prob) {
    check_problem(prob);
    ExistenceReport rep;
    rep.necessary_value = spectral_radius(solve_linear(prob.p0, prob.p1));
    rep.nec_ok = rep.necessary_value <= 0.5 * (1.0 + 1e-12);
    rep.sufficient_value = norm_2(inverse(prob.p0)) * norm_2(prob.p1);
    rep.suff_ok = rep.sufficient_value < 0.5;
    return rep;
}

}  // namespace msf
