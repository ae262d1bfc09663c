#include "msf/matpoly.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace msf {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

}  // namespace

int MatLaurentPoly::degree() const {
    int d = 0;
    for (const auto& [k, c] : coeffs_)
        if (norm_max(c) > 0.0) d = std::max(d, std::abs(k));
    return d;
}

void MatLaurentPoly::set(int k, DenseMatrix c) {
    if (c.rows() != dim_ || c.cols() != dim_)
        throw DimensionMismatch("coefficient shape does not match the polynomial");
    coeffs_[k] = std::move(c);
}

DenseMatrix MatLaurentPoly::coeff(int k) const {
    const auto it = coeffs_.find(k);
    return it == coeffs_.end() ? DenseMatrix(dim_, dim_) : it->second;
}

double ScalarLaurentPoly::coeff(int k) const {
    const auto it = coeffs.find(k);
    return it == coeffs.end() ? 0.0 : it->second;
}

int ScalarLaurentPoly::min_index() const {
    for (const auto& [k, c] : coeffs)
        if (c != 0.0) return k;
    return 0;
}

int ScalarLaurentPoly::max_index() const {
    int m = 0;
    bool seen = false;
    for (const auto& [k, c] : coeffs)
        if (c != 0.0) {
            m = k;
            seen = true;
        }
    return seen ? m : 0;
}

MatLaurentPoly para_conjugate(const MatLaurentPoly& p) {
    MatLaurentPoly r(p.dim());
    for (const auto& [k, c] : p.table()) r.set(-k, c.t());
    return r;
}

bool is_para_hermitian(const MatLaurentPoly& p, double tol) {
    double scale = 0.0;
    for (const auto& [k, c] : p.table()) scale = std::max(scale, norm_max(c));
    if (scale == 0.0) return true;
    const MatLaurentPoly pc = para_conjugate(p);
    const int d = std::max(p.degree(), pc.degree());
    for (int k = -d; k <= d; ++k)
        if (norm_max(p.coeff(k) - pc.coeff(k)) > tol * scale) return false;
    return true;
}

std::pair<DenseMatrix, DenseMatrix> eval(const MatLaurentPoly& p, ComplexPair z) {
    const std::complex<double> zc(z.re, z.im);
    const std::size_t n = p.dim();
    DenseMatrix re(n, n), im(n, n);
    for (const auto& [k, c] : p.table()) {
        const std::complex<double> zk = std::pow(zc, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                re(i, j) += c(i, j) * zk.real();
                im(i, j) += c(i, j) * zk.imag();
            }
    }
    return {re, im};
}

PsdReport psd_on_circle(const MatLaurentPoly& p, std::size_t samples, double tol) {
    PsdReport rep;
    rep.min_eig = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (const auto& [k, c] : p.table()) scale = std::max(scale, norm_max(c));
    const std::size_t n = p.dim();
    for (std::size_t s = 0; s < samples; ++s) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(s) /
                             static_cast<double>(samples);
        const auto [a, b] = eval(p, {std::cos(theta), std::sin(theta)});
        // Hermitian value A + iB embeds as the symmetric [[A,-B],[B,A]]
        DenseMatrix m(2 * n, 2 * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = a(i, j);
                m(n + i, n + j) = a(i, j);
                m(i, n + j) = -b(i, j);
                m(n + i, j) = b(i, j);
            }
        const double lo = symmetric_eigenvalues(m).front();
        if (lo < rep.min_eig) {
            rep.min_eig = lo;
            rep.theta_min = theta;
        }
    }
    rep.ok = rep.min_eig >= -tol * std::max(1.0, scale);
    return rep;
}

EmbeddedPair block_embed(const MatLaurentPoly& p) {
    const int m = p.degree();
    const std::size_t r = p.dim();
    const std::size_t mm = static_cast<std::size_t>(std::max(m, 1));
    const std::size_t n = r * mm;
    EmbeddedPair e{DenseMatrix(n, n), DenseMatrix(n, n)};
    for (std::size_t bi = 0; bi < mm; ++bi)
        for (std::size_t bj = 0; bj < mm; ++bj) {
            const DenseMatrix c0 = p.coeff(static_cast<int>(bj) - static_cast<int>(bi));
            const DenseMatrix c1 =
                m == 0 ? DenseMatrix(r, r)
                       : p.coeff(m + static_cast<int>(bj) - static_cast<int>(bi));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) {
                    e.p0(bi * r + i, bj * r + j) = c0(i, j);
                    e.p1(bi * r + i, bj * r + j) = c1(i, j);
                }
        }
    return e;
}

ExtractedFactors block_extract(const DenseMatrix& h0_hat, const DenseMatrix& h1_hat,
                               std::size_t r, double tol) {
    if (r == 0 || h0_hat.rows() != h0_hat.cols() || h1_hat.rows() != h1_hat.cols() ||
        h0_hat.rows() != h1_hat.rows() || h0_hat.rows() % r != 0)
        throw DimensionMismatch("block factor shapes disagree");
    const std::size_t mm = h0_hat.rows() / r;
    const int m = static_cast<int>(mm);
    ExtractedFactors out;
    // occurrences: hat H0 block (i,j) holds H_{i-j}; hat H1 block (i,j)
    // holds H_{m+i-j}
    std::vector<std::vector<DenseMatrix>> occ(static_cast<std::size_t>(m) + 1);
    auto grab = [&](const DenseMatrix& src, std::size_t bi, std::size_t bj) {
        DenseMatrix blk(r, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) blk(i, j) = src(bi * r + i, bj * r + j);
        return blk;
    };
    for (std::size_t bi = 0; bi < mm; ++bi)
        for (std::size_t bj = 0; bj < mm; ++bj) {
            const int k0 = static_cast<int>(bi) - static_cast<int>(bj);
            if (k0 >= 0 && k0 <= m) occ[k0].push_back(grab(h0_hat, bi, bj));
            const int k1 = m + static_cast<int>(bi) - static_cast<int>(bj);
            if (k1 >= 0 && k1 <= m) occ[k1].push_back(grab(h1_hat, bi, bj));
        }
    double scale = std::max(norm_max(h0_hat), norm_max(h1_hat));
    if (scale == 0.0) scale = 1.0;
    for (std::size_t k = 0; k <= static_cast<std::size_t>(m); ++k) {
        DenseMatrix mean(r, r);
        for (const DenseMatrix& b : occ[k]) mean += b;
        mean *= 1.0 / static_cast<double>(occ[k].size());
        for (const DenseMatrix& b : occ[k])
            out.discrepancy = std::max(out.discrepancy, norm_max(b - mean));
        out.h.push_back(mean);
    }
    if (out.discrepancy > tol * scale) throw InconsistentBlocks(out.discrepancy);
    return out;
}

namespace {

// determinant of a complex matrix by LU with partial pivoting
std::complex<double> complex_det(std::vector<std::complex<double>> a, std::size_t n) {
    std::complex<double> det(1.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
        if (a[piv * n + k] == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
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

ScalarLaurentPoly det_poly(const MatLaurentPoly& p, double interp_tol) {
    const std::size_t r = p.dim();
    const int band = static_cast<int>(r) * p.degree();
    const std::size_t n_samples = static_cast<std::size_t>(2 * band + 1);
    std::vector<std::complex<double>> values(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(s) /
                             static_cast<double>(n_samples);
        const auto [a, b] = eval(p, {std::cos(theta), std::sin(theta)});
        std::vector<std::complex<double>> m(r * r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                m[i * r + j] = {a(i, j), b(i, j)};
        values[s] = complex_det(std::move(m), r);
    }
    // c_k = (1/N) sum_s q(w^s) w^{-sk}, exact for the band
    ScalarLaurentPoly q;
    std::vector<double> mag;
    for (int k = -band; k <= band; ++k) {
        std::complex<double> c(0.0, 0.0);
        for (std::size_t s = 0; s < n_samples; ++s) {
            const double phi = -2.0 * std::numbers::pi * static_cast<double>(s) * k /
                               static_cast<double>(n_samples);
            c += values[s] * std::complex<double>(std::cos(phi), std::sin(phi));
        }
        c /= static_cast<double>(n_samples);
        q.coeffs[k] = c.real();  // real input polynomial
        mag.push_back(std::abs(c));
    }
    const double top = mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
    for (auto it = q.coeffs.begin(); it != q.coeffs.end();)
        it = (std::abs(it->second) < interp_tol * top) ? q.coeffs.erase(it)
                                                       : std::next(it);
    return q;
}

CircleZeroReport circle_zeros(const ScalarLaurentPoly& q, double circle_tol,
                              double cluster_tol) {
    CircleZeroReport rep;
    // strip to an ordinary polynomial supported on [0, deg]
    std::vector<std::pair<int, double>> nz;
    for (const auto& [k, c] : q.coeffs)
        if (c != 0.0) nz.push_back({k, c});
    if (nz.size() <= 1) return rep;  // constant or zero: no roots off the origin
    const int k0 = nz.front().first, k1 = nz.back().first;
    const std::size_t deg = static_cast<std::size_t>(k1 - k0);
    std::vector<double> a(deg + 1, 0.0);  // a[i] multiplies z^i
    for (const auto& [k, c] : nz) a[static_cast<std::size_t>(k - k0)] = c;

    // companion matrix of the monic normalization
    DenseMatrix comp(deg, deg);
    for (std::size_t j = 0; j < deg; ++j) comp(0, j) = -a[deg - 1 - j] / a[deg];
    for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    const std::vector<ComplexPair> roots = eigenvalues(comp);

    // single-linkage clustering: a d-fold root scatters like eps^(1/d)
    // (d <= deg), and the scattered ring is chained by its own spacing
    const double radius =
        std::max(cluster_tol, 6.0 * std::pow(kEps, 1.0 / static_cast<double>(deg)));
    const std::size_t n = roots.size();
    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::hypot(roots[i].re - roots[j].re, roots[i].im - roots[j].im) <=
                radius)
                parent[find(i)] = find(j);

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    for (const auto& [root_id, members] : groups) {
        CircleZero cz;
        double re = 0.0, im = 0.0;
        for (std::size_t i : members) {
            re += roots[i].re;
            im += roots[i].im;
        }
        cz.location = {re / static_cast<double>(members.size()),
                       im / static_cast<double>(members.size())};
        cz.multiplicity = static_cast<int>(members.size());
        cz.on_circle = std::abs(cz.location.modulus() - 1.0) <= circle_tol;
        rep.any_on_circle = rep.any_on_circle || cz.on_circle;
        rep.zeros.push_back(cz);
    }
    std::sort(rep.zeros.begin(), rep.zeros.end(), [](const CircleZero& x, const CircleZero& y) {
        if (x.location.re != y.location.re) return x.location.re < y.location.re;
        return x.location.im < y.location.im;
    });
    return rep;
}

MatLaurentPoly factor_product(const std::vector<DenseMatrix>& h) {
    if (h.empty()) return MatLaurentPoly(0);
    const std::size_t r = h[0].rows();
    const int m = static_cast<int>(h.size()) - 1;
    MatLaurentPoly p(r);
    for (int j = -m; j <= m; ++j) {
        DenseMatrix c(r, r);
        for (int k = 0; k <= m; ++k) {
            const int l = k + j;
            if (l < 0 || l > m) continue;
            c += h[static_cast<std::size_t>(k)] * h[static_cast<std::size_t>(l)].t();
        }
        p.set(j, c);
    }
    return p;
}

}  // namespace msf
