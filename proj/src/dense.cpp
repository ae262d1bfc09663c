#include "msf/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace msf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require(bool cond, const char* what) {
    if (!cond) throw DimensionMismatch(what);
}

}  // namespace

double ComplexPair::modulus() const { return std::hypot(re, im); }

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
    require(a_.size() == rows * cols, "entry count does not match shape");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::t() const {
    DenseMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& rhs) {
    require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "shape mismatch in +=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += rhs.a_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& rhs) {
    require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "shape mismatch in -=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= rhs.a_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (double& x : a_) x *= s;
    return *this;
}

DenseMatrix operator+(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs += rhs; }
DenseMatrix operator-(DenseMatrix lhs, const DenseMatrix& rhs) { return lhs -= rhs; }

DenseMatrix operator*(const DenseMatrix& lhs, const DenseMatrix& rhs) {
    require(lhs.cols() == rhs.rows(), "shape mismatch in matrix product");
    DenseMatrix r(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const double lik = lhs(i, k);
            if (lik == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) r(i, j) += lik * rhs(k, j);
        }
    return r;
}

DenseMatrix operator*(double s, DenseMatrix m) { return m *= s; }
DenseMatrix operator*(DenseMatrix m, double s) { return m *= s; }

DenseMatrix symmetrize(const DenseMatrix& a) {
    require(a.rows() == a.cols(), "symmetrize needs a square matrix");
    DenseMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = 0.5 * (a(i, j) + a(j, i));
    return r;
}

DenseMatrix cholesky(const DenseMatrix& a, double pivot_tol) {
    require(a.rows() == a.cols(), "cholesky needs a square matrix");
    const std::size_t n = a.rows();
    DenseMatrix s = symmetrize(a);
    if (pivot_tol < 0.0) {
        double maxdiag = 0.0;
        for (std::size_t i = 0; i < n; ++i) maxdiag = std::max(maxdiag, std::abs(s(i, i)));
        pivot_tol = 1e-14 * maxdiag;
    }
    DenseMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = s(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= pivot_tol) throw NotPositiveDefinite(j, d);
        const double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = s(i, j);
            for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
            l(i, j) = v / ljj;
        }
    }
    return l;
}

DenseMatrix solve_linear(const DenseMatrix& a, const DenseMatrix& b) {
    require(a.rows() == a.cols(), "solve_linear needs a square matrix");
    require(a.rows() == b.rows(), "right-hand side has wrong row count");
    const std::size_t n = a.rows(), m = b.cols();
    DenseMatrix lu = a, x = b;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    double amax = norm_max(a);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
        if (std::abs(lu(p, k)) <= kEps * amax * static_cast<double>(n))
            throw SingularSystem("pivot below noise at column " + std::to_string(k));
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(p, j));
            for (std::size_t j = 0; j < m; ++j) std::swap(x(k, j), x(p, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
            for (std::size_t j = 0; j < m; ++j) x(i, j) -= f * x(k, j);
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = 0; j < m; ++j) {
            double v = x(k, j);
            for (std::size_t i = k + 1; i < n; ++i) v -= lu(k, i) * x(i, j);
            x(k, j) = v / lu(k, k);
        }
    }
    return x;
}

DenseMatrix inverse(const DenseMatrix& a) {
    return solve_linear(a, DenseMatrix::identity(a.rows()));
}

namespace {

// Diagonal similarity scaling (powers of 2) to balance row and column
// norms; improves eigenvalue accuracy for badly scaled inputs such as
// companion matrices.
void balance(DenseMatrix& a) {
    const std::size_t n = a.rows();
    const double radix = 2.0, sq = radix * radix;
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double c = 0.0, r = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double f = 1.0, g = r / radix, s = c + r;
            while (c < g) {
                f *= radix;
                c *= sq;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sq;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                const double inv = 1.0 / f;
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= inv;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
}

// Householder reduction to upper Hessenberg form, in place.
void hessenberg(DenseMatrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    std::vector<double> u(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double wn = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) wn += a(i, k) * a(i, k);
        wn = std::sqrt(wn);
        if (wn == 0.0) continue;
        const double alpha = (a(k + 1, k) >= 0.0) ? -wn : wn;
        double un = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            u[i] = a(i, k);
            if (i == k + 1) u[i] -= alpha;
            un += u[i] * u[i];
        }
        un = std::sqrt(un);
        if (un == 0.0) continue;
        for (std::size_t i = k + 1; i < n; ++i) u[i] /= un;
        // A <- P A with P = I - 2 u u^T acting on rows k+1..n-1
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += u[i] * a(i, j);
            s *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * u[i];
        }
        // A <- A P on columns k+1..n-1
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * u[j];
            s *= 2.0;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * u[j];
        }
        a(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Eigenvalues of the 2x2 block [[a,b],[c,d]].
void eig2(double a, double b, double c, double d, std::vector<ComplexPair>& out) {
    const double mean = 0.5 * (a + d);
    const double off = 0.5 * (a - d);
    const double disc = off * off + b * c;
    if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        // larger-magnitude eigenvalue first, partner via determinant when safe
        const double l1 = (mean >= 0.0) ? mean + root : mean - root;
        double l2;
        if (l1 != 0.0 && root != 0.0) {
            l2 = (a * d - b * c) / l1;
        } else {
            l2 = mean + ((mean >= 0.0) ? -root : root);
        }
        out.push_back({l1, 0.0});
        out.push_back({l2, 0.0});
    } else {
        const double root = std::sqrt(-disc);
        out.push_back({mean, root});
        out.push_back({mean, -root});
    }
}

// Implicit double-shift QR on an upper Hessenberg matrix; eigenvalues only.
std::vector<ComplexPair> francis(DenseMatrix& h) {
    const std::size_t n = h.rows();
    std::vector<ComplexPair> eigs;
    eigs.reserve(n);
    if (n == 0) return eigs;

    std::ptrdiff_t hi = static_cast<std::ptrdiff_t>(n) - 1;
    long iters_block = 0, iters_total = 0;
    const long cap = 60 * static_cast<long>(n) + 200;

    auto subdiag_small = [&](std::ptrdiff_t i) {
        const double s = std::abs(h(i - 1, i - 1)) + std::abs(h(i, i));
        const double ref = (s == 0.0) ? norm_fro(h) : s;
        return std::abs(h(i, i - 1)) <= kEps * ref;
    };

    while (hi >= 0) {
        std::ptrdiff_t lo = hi;
        while (lo > 0 && !subdiag_small(lo)) --lo;
        if (lo > 0) h(lo, lo - 1) = 0.0;

        if (lo == hi) {
            eigs.push_back({h(hi, hi), 0.0});
            --hi;
            iters_block = 0;
            continue;
        }
        if (lo == hi - 1) {
            eig2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi), eigs);
            hi -= 2;
            iters_block = 0;
            continue;
        }

        if (++iters_total > cap) throw EigenFailure("QR iteration did not converge");
        ++iters_block;

        double s, t;
        if (iters_block % 11 == 10) {
            // exceptional shift breaks rare cycling
            const double w = std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2));
            const double v = h(hi, hi) + 0.75 * w;
            s = 2.0 * v;
            t = v * v;
        } else {
            s = h(hi - 1, hi - 1) + h(hi, hi);
            t = h(hi - 1, hi - 1) * h(hi, hi) - h(hi - 1, hi) * h(hi, hi - 1);
        }

        // first column of (H - s1)(H - s2) restricted to the active block
        double x = h(lo, lo) * h(lo, lo) + h(lo, lo + 1) * h(lo + 1, lo) - s * h(lo, lo) + t;
        double y = h(lo + 1, lo) * (h(lo, lo) + h(lo + 1, lo + 1) - s);
        double z = h(lo + 1, lo) * h(lo + 2, lo + 1);

        for (std::ptrdiff_t k = lo; k <= hi - 1; ++k) {
            const int len = (k <= hi - 2) ? 3 : 2;
            double w0, w1, w2;
            if (k == lo) {
                w0 = x;
                w1 = y;
                w2 = (len == 3) ? z : 0.0;
            } else {
                w0 = h(k, k - 1);
                w1 = h(k + 1, k - 1);
                w2 = (len == 3) ? h(k + 2, k - 1) : 0.0;
            }
            double wn = std::sqrt(w0 * w0 + w1 * w1 + w2 * w2);
            if (wn == 0.0) continue;
            const double alpha = (w0 >= 0.0) ? -wn : wn;
            double u0 = w0 - alpha, u1 = w1, u2 = w2;
            const double un = std::sqrt(u0 * u0 + u1 * u1 + u2 * u2);
            if (un == 0.0) continue;
            u0 /= un;
            u1 /= un;
            u2 /= un;

            const std::ptrdiff_t jlo = (k > lo) ? k - 1 : lo;
            for (std::ptrdiff_t j = jlo; j <= hi; ++j) {
                double dot = u0 * h(k, j) + u1 * h(k + 1, j);
                if (len == 3) dot += u2 * h(k + 2, j);
                dot *= 2.0;
                h(k, j) -= dot * u0;
                h(k + 1, j) -= dot * u1;
                if (len == 3) h(k + 2, j) -= dot * u2;
            }
            const std::ptrdiff_t imax = std::min<std::ptrdiff_t>(hi, k + len);
            for (std::ptrdiff_t i = lo; i <= imax; ++i) {
                double dot = h(i, k) * u0 + h(i, k + 1) * u1;
                if (len == 3) dot += h(i, k + 2) * u2;
                dot *= 2.0;
                h(i, k) -= dot * u0;
                h(i, k + 1) -= dot * u1;
                if (len == 3) h(i, k + 2) -= dot * u2;
            }
            if (k > lo) {
                h(k + 1, k - 1) = 0.0;
                if (len == 3) h(k + 2, k - 1) = 0.0;
            }
        }
    }
    return eigs;
}

}  // namespace

std::vector<ComplexPair> eigenvalues(const DenseMatrix& a) {
    require(a.rows() == a.cols(), "eigenvalues needs a square matrix");
    require(a.rows() <= 64, "eigenvalue solver is limited to dimension 64");
    const std::size_t n = a.rows();
    std::vector<ComplexPair> out;
    if (n == 0) return out;
    if (n == 1) return {{a(0, 0), 0.0}};
    if (n == 2) {
        eig2(a(0, 0), a(0, 1), a(1, 0), a(1, 1), out);
        return out;
    }
    DenseMatrix h = a;
    balance(h);
    hessenberg(h);
    return francis(h);
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& a) {
    require(a.rows() == a.cols(), "symmetric_eigenvalues needs a square matrix");
    const std::size_t n = a.rows();
    DenseMatrix s = symmetrize(a);
    if (n == 0) return {};
    const double scale = norm_fro(s);
    if (scale == 0.0) return std::vector<double>(n, 0.0);

    auto offnorm = [&]() {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) v += 2.0 * s(i, j) * s(i, j);
        return std::sqrt(v);
    };

    for (int sweep = 0; sweep < 50 && offnorm() > 1e-15 * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = s(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                const double theta = (s(q, q) - s(p, p)) / (2.0 * apq);
                const double tsign = (theta >= 0.0) ? 1.0 : -1.0;
                const double tt = tsign / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tt * tt + 1.0);
                const double sn = tt * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double skp = s(k, p), skq = s(k, q);
                    s(k, p) = c * skp - sn * skq;
                    s(k, q) = sn * skp + c * skq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double spk = s(p, k), sqk = s(q, k);
                    s(p, k) = c * spk - sn * sqk;
                    s(q, k) = sn * spk + c * sqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = s(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const double v = a(ia, ja);
            if (v == 0.0) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    r(ia * b.rows() + ib, ja * b.cols() + jb) = v * b(ib, jb);
        }
    return r;
}

DenseMatrix vec_of(const DenseMatrix& a) {
    DenseMatrix v(a.rows() * a.cols(), 1);
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) v(j * a.rows() + i, 0) = a(i, j);
    return v;
}

DenseMatrix unvec(const DenseMatrix& v, std::size_t rows, std::size_t cols) {
    require(v.cols() == 1 && v.rows() == rows * cols, "unvec shape mismatch");
    DenseMatrix a(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) a(i, j) = v(j * rows + i, 0);
    return a;
}

double norm_fro(const DenseMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

double norm_max(const DenseMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) s = std::max(s, std::abs(a(i, j)));
    return s;
}

double norm_2(const DenseMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    if (a.rows() == 1 || a.cols() == 1) return norm_fro(a);
    const DenseMatrix g = a.t() * a;
    const std::vector<double> ev = symmetric_eigenvalues(g);
    const double top = std::max(0.0, ev.back());
    return std::sqrt(top);
}

double spectral_radius(const DenseMatrix& a) {
    double r = 0.0;
    for (const ComplexPair& l : eigenvalues(a)) r = std::max(r, l.modulus());
    return r;
}

}  // namespace msf
