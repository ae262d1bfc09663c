#include "msf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace msf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kFitTol = 0.15;

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    double st = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        st += t[i];
        sy += y[i];
    }
    const double mt = st / n, my = sy / n;
    double stt = 0, sty = 0;
    for (std::size_t i = 0; i < n; ++i) {
        stt += (t[i] - mt) * (t[i] - mt);
        sty += (t[i] - mt) * (y[i] - my);
    }
    LineFit f;
    f.slope = stt > 0 ? sty / stt : 0.0;
    f.intercept = my - f.slope * mt;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - f.intercept - f.slope * t[i];
        rss += r * r;
    }
    f.rms = std::sqrt(rss / n);
    return f;
}

std::vector<RatePoint> positive_series(const IterationTrace& trace, double TraceRecord::*field) {
    std::vector<RatePoint> out;
    out.reserve(trace.records.size());
    for (const TraceRecord& r : trace.records) {
        const double v = r.*field;
        if (v > 0.0 && std::isfinite(v)) out.push_back({r.n, v});
    }
    return out;
}

std::complex<double> complex_det(std::vector<std::complex<double>> a, std::size_t n) {
    std::complex<double> det(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > best) {
                best = std::abs(a[i * n + k]);
                piv = i;
            }
        if (best == 0.0) return {0.0, 0.0};
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            det = -det;
        }
        det *= a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const std::complex<double> f = a[i * n + k] / a[k * n + k];
            for (std::size_t j = k + 1; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
        }
    }
    return det;
}

}  // namespace

std::string to_string(RateClass c) {
    switch (c) {
        case RateClass::Quadratic: return "quadratic";
        case RateClass::Linear: return "linear";
        case RateClass::Sublinear: return "sublinear";
        case RateClass::Stalled: return "stalled";
        case RateClass::Inconclusive: return "inconclusive";
    }
    return "unknown";
}

std::vector<RatePoint> series_eps_p(const IterationTrace& trace) {
    return positive_series(trace, &TraceRecord::eps_p);
}

std::vector<RatePoint> series_eps_h(const IterationTrace& trace) {
    return positive_series(trace, &TraceRecord::eps_h);
}

std::vector<RatePoint> series_step(const IterationTrace& trace) {
    return positive_series(trace, &TraceRecord::step_norm);
}

RateEstimate estimate_rate(const std::vector<RatePoint>& errors, std::size_t burn_in) {
    if (errors.size() < burn_in + 8)
        throw InsufficientData("need at least 8 error entries after burn-in");

    const std::size_t len = errors.size() - burn_in;
    const RatePoint* e = errors.data() + burn_in;

    // trim at the noise floor: no relative progress across five recorded
    // steps, or an upcross above 1.5x the running minimum
    std::size_t plateau = len;
    double runmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < len; ++i) {
        if (e[i].e > 1.5 * runmin) {
            plateau = i;
            break;
        }
        runmin = std::min(runmin, e[i].e);
        if (i + 5 < len && e[i + 5].e >= e[i].e * (1.0 - 10.0 * kEps)) {
            plateau = i;
            break;
        }
    }

    RateEstimate est;
    est.points = plateau;
    if (plateau > 0) {
        est.n_first = e[0].n;
        est.n_last = e[plateau - 1].n;
    }
    if (plateau < 3) {
        est.cls = RateClass::Stalled;
        return est;
    }

    std::vector<double> t(plateau), y(plateau);
    for (std::size_t i = 0; i < plateau; ++i) {
        t[i] = static_cast<double>(e[i].n);
        y[i] = std::log(e[i].e);
    }
    const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
    const double range = *ymax - *ymin;
    if (range < 1e-9) {
        est.cls = RateClass::Stalled;
        return est;
    }

    const LineFit lin = fit_line(t, y);
    const double res_lin = lin.rms / range;
    const bool lin_ok = lin.slope < 0.0 && std::exp(lin.slope) < 0.95;

    std::vector<double> logt(plateau);
    for (std::size_t i = 0; i < plateau; ++i) logt[i] = std::log(t[i] + 1.0);
    const LineFit sub = fit_line(logt, y);
    const double res_sub = sub.rms / range;
    const bool sub_ok = sub.slope < 0.0 && -sub.slope > 0.1;

    // the doubling relation only makes sense on consecutive iterations
    bool consecutive = true;
    for (std::size_t i = 1; i < plateau; ++i)
        if (e[i].n != e[i - 1].n + 1) consecutive = false;
    double res_quad = std::numeric_limits<double>::infinity();
    double quad_c = 0.0;
    if (consecutive) {
        double sum = 0;
        for (std::size_t i = 0; i + 1 < plateau; ++i) sum += y[i + 1] - 2.0 * y[i];
        quad_c = sum / (plateau - 1);
        double rss = 0;
        for (std::size_t i = 0; i + 1 < plateau; ++i) {
            const double d = y[i + 1] - 2.0 * y[i] - quad_c;
            rss += d * d;
        }
        res_quad = std::sqrt(rss / (plateau - 1)) / range;
    }

    struct Candidate {
        RateClass cls;
        double res;
        bool ok;
    };
    const Candidate cands[3] = {
        {RateClass::Quadratic, res_quad, consecutive && res_quad < kFitTol},
        {RateClass::Linear, res_lin, lin_ok && res_lin < kFitTol},
        {RateClass::Sublinear, res_sub, sub_ok && res_sub < kFitTol},
    };
    const Candidate* best = nullptr;
    for (const Candidate& c : cands)
        if (c.ok && (!best || c.res < best->res)) best = &c;

    if (!best) {
        est.cls = RateClass::Inconclusive;
        est.fit_residual = std::min({res_lin, res_sub, res_quad});
        return est;
    }
    est.cls = best->cls;
    est.fit_residual = best->res;
    switch (best->cls) {
        case RateClass::Quadratic: est.factor = std::exp(quad_c); break;
        case RateClass::Linear: est.factor = std::exp(lin.slope); break;
        case RateClass::Sublinear: est.power = -sub.slope; break;
        default: break;
    }
    return est;
}

double expected_newton_factor(int p) {
    if (p < 1) throw std::invalid_argument("chain size must be at least 1");
    return std::exp2(-1.0 / p);
}

DenseMatrix closed_loop(const DenseMatrix& x, const DenseMatrix& p1) {
    return solve_linear(x, p1);
}

SingularityReport singularity_report(const DenseMatrix& x, const DenseMatrix& p1,
                                     double circle_tol, double cluster_radius) {
    SingularityReport rep;
    rep.eigenvalues = eigenvalues(closed_loop(x, p1));
    std::vector<std::size_t> near;  // candidates for the chain estimate
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        const double m = rep.eigenvalues[i].modulus();
        rep.max_modulus = std::max(rep.max_modulus, m);
        if (std::abs(m - 1.0) <= circle_tol)
            ++rep.on_circle;
        else if (m < 1.0)
            ++rep.inside;
        else
            ++rep.outside;
        if (std::abs(m - 1.0) <= cluster_radius) near.push_back(i);
    }

    // largest location cluster among near-circle eigenvalues: a defective
    // eigenvalue in a size-p chain scatters like eps^(1/p), well inside
    // cluster_radius, while distinct roots stay apart
    std::vector<std::size_t> parent(near.size());
    for (std::size_t i = 0; i < near.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (std::size_t i = 0; i < near.size(); ++i)
        for (std::size_t j = i + 1; j < near.size(); ++j) {
            const ComplexPair& u = rep.eigenvalues[near[i]];
            const ComplexPair& v = rep.eigenvalues[near[j]];
            const double d = std::hypot(u.re - v.re, u.im - v.im);
            if (d <= cluster_radius) parent[find(i)] = find(j);
        }
    std::vector<int> size(near.size(), 0);
    for (std::size_t i = 0; i < near.size(); ++i) ++size[find(i)];
    for (int s : size) rep.p_estimate = std::max(rep.p_estimate, s);
    return rep;
}

PencilPair gdare_pencil(const NmeProblem& prob) {
    const std::size_t r = prob.p0.rows();
    if (prob.p0.cols() != r || prob.p1.rows() != r || prob.p1.cols() != r)
        throw DimensionMismatch("pencil needs square coefficients of equal size");
    PencilPair p;
    p.m = DenseMatrix(3 * r, 3 * r);
    p.n = DenseMatrix(3 * r, 3 * r);
    for (std::size_t i = 0; i < r; ++i) {
        p.m(i, 2 * r + i) = 1.0;           // M(0,2) = I
        p.m(r + i, r + i) = 1.0;           // M(1,1) = I
        p.n(i, i) = 1.0;                   // N(0,0) = I
        p.n(2 * r + i, r + i) = -1.0;      // N(2,1) = -I
        for (std::size_t j = 0; j < r; ++j) {
            p.m(r + i, j) = prob.p0(i, j);            // M(1,0) = P0
            p.m(r + i, 2 * r + j) = -prob.p1(j, i);   // M(1,2) = -P1^T
            p.m(2 * r + i, j) = prob.p1(i, j);        // M(2,0) = P1
        }
    }
    return p;
}

PencilReport pencil_unit_circle_report(const PencilPair& pencil, double circle_tol) {
    const std::size_t s = pencil.m.rows();
    if (pencil.n.rows() != s || pencil.m.cols() != s || pencil.n.cols() != s)
        throw DimensionMismatch("pencil matrices must be square and equal size");

    // det(M - lambda N) is a polynomial of degree at most s; sample it on a
    // circle away from the eigenvalues and invert the DFT
    const std::size_t K = s + 1;
    const double rho = 1.37;
    std::vector<std::complex<double>> dets(K);
    std::vector<std::complex<double>> a(s * s);
    for (std::size_t j = 0; j < K; ++j) {
        const double th = 2.0 * M_PI * j / K;
        const std::complex<double> lam = rho * std::complex<double>(std::cos(th), std::sin(th));
        for (std::size_t u = 0; u < s; ++u)
            for (std::size_t v = 0; v < s; ++v)
                a[u * s + v] = pencil.m(u, v) - lam * pencil.n(u, v);
        dets[j] = complex_det(a, s);
    }
    std::vector<double> coeff(K);
    double maxc = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        std::complex<double> c(0.0, 0.0);
        for (std::size_t j = 0; j < K; ++j) {
            const double th = -2.0 * M_PI * j * k / K;
            c += dets[j] * std::complex<double>(std::cos(th), std::sin(th));
        }
        coeff[k] = c.real() / (K * std::pow(rho, static_cast<double>(k)));
        maxc = std::max(maxc, std::abs(coeff[k]));
    }

    PencilReport rep;
    if (maxc == 0.0) return rep;  // identically singular pencil
    ScalarLaurentPoly q;
    for (std::size_t k = 0; k < K; ++k)
        if (std::abs(coeff[k]) >= 1e-10 * maxc) q.coeffs[static_cast<int>(k)] = coeff[k];
    if (q.coeffs.size() <= 1 && q.max_index() == 0) return rep;  // no finite spectrum

    const CircleZeroReport zeros = circle_zeros(q, circle_tol);
    rep.zeros = zeros.zeros;
    for (const CircleZero& z : rep.zeros) {
        const double m = z.location.modulus();
        rep.max_modulus = std::max(rep.max_modulus, m);
        rep.finite += z.multiplicity;
        if (z.on_circle)
            rep.on_circle += z.multiplicity;
        else if (m < 1.0)
            rep.inside += z.multiplicity;
        else
            rep.outside += z.multiplicity;
    }
    return rep;
}

}  // namespace msf
