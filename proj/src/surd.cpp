#include "msf/surd.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace msf {

namespace {

std::vector<int> remap_table(const std::vector<long long>& from,
                             const std::vector<long long>& to) {
    std::vector<int> table(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) {
        auto it = std::lower_bound(to.begin(), to.end(), from[i]);
        table[i] = static_cast<int>(it - to.begin());
    }
    return table;
}

std::uint32_t remap_mask(std::uint32_t mask, const std::vector<int>& table) {
    std::uint32_t out = 0;
    for (std::size_t i = 0; mask != 0; ++i, mask >>= 1)
        if (mask & 1u) out |= (1u << table[i]);
    return out;
}

std::vector<long long> merge_primes(const std::vector<long long>& a,
                                    const std::vector<long long>& b) {
    std::vector<long long> m;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(m));
    return m;
}

// split off the highest generator: a = lo + hi * sqrt(p_top)
void split_top(const SurdElem& a, SurdElem& lo, SurdElem& hi, long long& p_top) {
    const auto& primes = a.generators();
    const std::size_t h = primes.size() - 1;
    p_top = primes[h];
    const std::uint32_t hbit = 1u << h;
    std::map<std::uint32_t, BigRational> lo_c, hi_c;
    for (const auto& [m, c] : a.terms()) {
        if (m & hbit)
            hi_c[m ^ hbit] = c;
        else
            lo_c[m] = c;
    }
    lo = SurdElem(primes, std::move(lo_c));
    hi = SurdElem(primes, std::move(hi_c));
}

// m = g^2 * r with r squarefree; radicand primes of r returned sorted.
// Trial division up to 1e6; an unclassifiable residual throws.
void square_split(BigInt m, BigInt& g, std::vector<long long>& rad) {
    g = 1;
    rad.clear();
    auto strip = [&](long long p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i) g *= p;
        if (e & 1) rad.push_back(p);
    };
    strip(2);
    for (long long d = 3; d <= 999999 && BigInt(d) * d <= m; d += 2)
        if (m % d == 0) strip(d);
    if (m > 1) {
        const BigInt s = boost::multiprecision::sqrt(m);
        if (s * s == m) {
            g *= s;
        } else if (m < BigInt("1000000000000")) {
            // no factor <= 1e6 and below 1e12, hence prime
            rad.push_back(m.convert_to<long long>());
        } else {
            throw NotRepresentable("radicand too large to factor");
        }
    }
    std::sort(rad.begin(), rad.end());
}

SurdElem sqrt_positive_rational(const BigRational& q) {
    if (q == 0) return SurdElem();
    const BigInt n = boost::multiprecision::numerator(q);
    const BigInt d = boost::multiprecision::denominator(q);
    BigInt g;
    std::vector<long long> rad;
    square_split(n * d, g, rad);  // sqrt(n/d) = sqrt(n d)/d
    const BigRational coeff(g, d);
    const std::uint32_t mask = rad.empty() ? 0u : ((1u << rad.size()) - 1u);
    return SurdElem(rad, {{mask, coeff}});
}

bool rational_perfect_sqrt(const BigRational& q, BigRational& out) {
    if (q < 0) return false;
    const BigInt n = boost::multiprecision::numerator(q);
    const BigInt d = boost::multiprecision::denominator(q);
    const BigInt sn = boost::multiprecision::sqrt(n);
    const BigInt sd = boost::multiprecision::sqrt(d);
    if (sn * sn == n && sd * sd == d) {
        out = BigRational(sn, sd);
        return true;
    }
    return false;
}

}  // namespace

SurdElem::SurdElem(std::vector<long long> primes, std::map<std::uint32_t, BigRational> coeffs)
    : primes_(std::move(primes)), coeffs_(std::move(coeffs)) {
    normalize();
}

void SurdElem::normalize() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();)
        it = (it->second == 0) ? coeffs_.erase(it) : std::next(it);
    std::uint32_t used = 0;
    for (const auto& [m, c] : coeffs_) used |= m;
    const std::uint32_t full =
        primes_.empty() ? 0u : ((1u << primes_.size()) - 1u);
    if (used == full) return;
    // compress out generators no term refers to
    std::vector<long long> kept;
    std::vector<int> table(primes_.size(), 0);
    for (std::size_t i = 0; i < primes_.size(); ++i)
        if (used & (1u << i)) {
            table[i] = static_cast<int>(kept.size());
            kept.push_back(primes_[i]);
        }
    std::map<std::uint32_t, BigRational> packed;
    for (const auto& [m, c] : coeffs_) packed[remap_mask(m, table)] = c;
    primes_ = std::move(kept);
    coeffs_ = std::move(packed);
}

bool SurdElem::is_rational() const { return primes_.empty(); }

BigRational SurdElem::rational_part() const {
    const auto it = coeffs_.find(0u);
    return it == coeffs_.end() ? BigRational(0) : it->second;
}

bool SurdElem::operator==(const SurdElem& rhs) const {
    return primes_ == rhs.primes_ && coeffs_ == rhs.coeffs_;
}

SurdElem surd_from_rational(const BigRational& q) {
    if (q == 0) return SurdElem();
    return SurdElem({}, {{0u, q}});
}

SurdElem surd_add(const SurdElem& a, const SurdElem& b) {
    const auto merged = merge_primes(a.generators(), b.generators());
    const auto ta = remap_table(a.generators(), merged);
    const auto tb = remap_table(b.generators(), merged);
    std::map<std::uint32_t, BigRational> out;
    for (const auto& [m, c] : a.terms()) out[remap_mask(m, ta)] += c;
    for (const auto& [m, c] : b.terms()) out[remap_mask(m, tb)] += c;
    return SurdElem(merged, std::move(out));
}

SurdElem surd_neg(const SurdElem& a) {
    std::map<std::uint32_t, BigRational> out;
    for (const auto& [m, c] : a.terms()) out[m] = -c;
    return SurdElem(a.generators(), std::move(out));
}

SurdElem surd_sub(const SurdElem& a, const SurdElem& b) { return surd_add(a, surd_neg(b)); }

SurdElem surd_mul(const SurdElem& a, const SurdElem& b) {
    const auto merged = merge_primes(a.generators(), b.generators());
    const auto ta = remap_table(a.generators(), merged);
    const auto tb = remap_table(b.generators(), merged);
    std::map<std::uint32_t, BigRational> out;
    for (const auto& [ma, ca] : a.terms()) {
        const std::uint32_t ra = remap_mask(ma, ta);
        for (const auto& [mb, cb] : b.terms()) {
            const std::uint32_t rb = remap_mask(mb, tb);
            // sqrt(S) sqrt(T) = prod(S & T) * sqrt(S ^ T)
            BigRational c = ca * cb;
            std::uint32_t common = ra & rb;
            for (std::size_t i = 0; common != 0; ++i, common >>= 1)
                if (common & 1u) c *= merged[i];
            out[ra ^ rb] += c;
        }
    }
    return SurdElem(merged, std::move(out));
}

SurdElem surd_inv(const SurdElem& a) {
    if (a.is_zero()) throw std::domain_error("exact division by zero");
    if (a.is_rational()) return surd_from_rational(1 / a.rational_part());
    SurdElem lo, hi;
    long long p = 0;
    split_top(a, lo, hi, p);
    // (lo + hi sqrt p)^{-1} = (lo - hi sqrt p) / (lo^2 - hi^2 p); the
    // denominator lives in the subfield, so the recursion shrinks
    const SurdElem pe = surd_from_rational(BigRational(p));
    const SurdElem denom = surd_sub(surd_mul(lo, lo), surd_mul(surd_mul(hi, hi), pe));
    const SurdElem dinv = surd_inv(denom);
    const SurdElem sqrtp({p}, {{1u, BigRational(1)}});
    return surd_mul(surd_sub(lo, surd_mul(hi, sqrtp)), dinv);
}

SurdElem surd_div(const SurdElem& a, const SurdElem& b) { return surd_mul(a, surd_inv(b)); }

int surd_sign(const SurdElem& a) {
    if (a.is_zero()) return 0;
    if (a.is_rational()) return a.rational_part() > 0 ? 1 : -1;
    SurdElem lo, hi;
    long long p = 0;
    split_top(a, lo, hi, p);
    const int slo = surd_sign(lo), shi = surd_sign(hi);
    if (shi == 0) return slo;
    if (slo == 0) return shi;
    if (slo == shi) return slo;
    // opposite signs: compare lo^2 against hi^2 p in the subfield
    const SurdElem pe = surd_from_rational(BigRational(p));
    const int sd = surd_sign(surd_sub(surd_mul(lo, lo), surd_mul(surd_mul(hi, hi), pe)));
    if (sd == 0) return 0;  // unreachable for distinct prime generators
    return sd > 0 ? slo : shi;
}

SurdElem surd_sqrt(const SurdElem& a) {
    const int sgn = surd_sign(a);
    if (sgn < 0) throw NotRepresentable("square root of a negative element");
    if (sgn == 0) return SurdElem();
    const auto& terms = a.terms();
    if (a.is_rational()) return sqrt_positive_rational(a.rational_part());
    if (terms.size() == 1) {
        // c sqrt(D) with D nontrivial: the square of any field element
        // has a rational component, so no representation exists
        throw NotRepresentable("square root leaves the quadratic tower");
    }
    if (terms.size() == 2 && terms.count(0u) == 1) {
        // u + v sqrt(D): denest when u^2 - v^2 D is a rational square
        const BigRational u = terms.at(0u);
        std::uint32_t dmask = 0;
        BigRational v;
        for (const auto& [m, c] : terms)
            if (m != 0u) {
                dmask = m;
                v = c;
            }
        BigRational dprod(1);
        {
            std::uint32_t m = dmask;
            for (std::size_t i = 0; m != 0; ++i, m >>= 1)
                if (m & 1u) dprod *= a.generators()[i];
        }
        const BigRational w2 = u * u - v * v * dprod;
        BigRational w;
        if (w2 < 0 || !rational_perfect_sqrt(w2, w))
            throw NotRepresentable("denesting failed");
        const SurdElem r1 = sqrt_positive_rational((u + w) / 2);
        const SurdElem r2 = sqrt_positive_rational((u - w) / 2);
        return (v > 0) ? surd_add(r1, r2) : surd_sub(r1, r2);
    }
    throw NotRepresentable("square root of a many-term element");
}

double to_float(const SurdElem& a) {
    long double acc = 0.0L;
    for (const auto& [m, c] : a.terms()) {
        long double radicand = 1.0L;
        std::uint32_t mm = m;
        for (std::size_t i = 0; mm != 0; ++i, mm >>= 1)
            if (mm & 1u) radicand *= static_cast<long double>(a.generators()[i]);
        acc += c.convert_to<long double>() * sqrtl(radicand);
    }
    return static_cast<double>(acc);
}

std::string to_string(const SurdElem& a) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : a.terms()) {
        if (!first) os << (c >= 0 ? " + " : " - ");
        const BigRational mag = (!first && c < 0) ? BigRational(-c) : c;
        if (m == 0u) {
            os << mag;
        } else {
            BigInt prod = 1;
            std::uint32_t mm = m;
            for (std::size_t i = 0; mm != 0; ++i, mm >>= 1)
                if (mm & 1u) prod *= a.generators()[i];
            if (mag != 1) os << mag << "*";
            os << "s" << prod;
        }
        first = false;
    }
    return os.str();
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    BigInt integer() {
        skip();
        const std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) throw SurdParseError("expected digits at offset " + std::to_string(pos));
        return BigInt(s.substr(start, pos - start));
    }
    SurdElem primary() {
        skip();
        if (pos >= s.size()) throw SurdParseError("unexpected end of expression");
        const char c = s[pos];
        if (c == '(') {
            ++pos;
            SurdElem v = expr();
            if (!eat(')')) throw SurdParseError("missing ')'");
            return v;
        }
        if (c == 's') {
            ++pos;
            return sqrt_positive_rational(BigRational(integer()));
        }
        if (std::isdigit(static_cast<unsigned char>(c)))
            return surd_from_rational(BigRational(integer()));
        throw SurdParseError(std::string("unexpected character '") + c + "'");
    }
    SurdElem unary() {
        if (eat('-')) return surd_neg(unary());
        return primary();
    }
    SurdElem term() {
        SurdElem v = unary();
        for (;;) {
            if (eat('*'))
                v = surd_mul(v, unary());
            else if (eat('/'))
                v = surd_div(v, unary());
            else
                return v;
        }
    }
    SurdElem expr() {
        SurdElem v = term();
        for (;;) {
            if (eat('+'))
                v = surd_add(v, term());
            else if (eat('-'))
                v = surd_sub(v, term());
            else
                return v;
        }
    }
};

}  // namespace

SurdElem surd_parse(const std::string& text) {
    Parser p{text};
    SurdElem v = p.expr();
    p.skip();
    if (p.pos != text.size()) throw SurdParseError("trailing characters in expression");
    return v;
}

SurdMatrix SurdMatrix::identity(std::size_t n) {
    SurdMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = surd_from_rational(1);
    return m;
}

SurdMatrix SurdMatrix::parse(std::size_t rows, std::size_t cols,
                             const std::vector<std::string>& entries) {
    if (entries.size() != rows * cols)
        throw DimensionMismatch("entry count does not match shape");
    SurdMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = surd_parse(entries[i * cols + j]);
    return m;
}

SurdMatrix SurdMatrix::t() const {
    SurdMatrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

bool SurdMatrix::operator==(const SurdMatrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) return false;
    for (std::size_t k = 0; k < a_.size(); ++k)
        if (a_[k] != rhs.a_[k]) return false;
    return true;
}

SurdMatrix operator+(const SurdMatrix& a, const SurdMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("shape mismatch in exact sum");
    SurdMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = surd_add(a(i, j), b(i, j));
    return r;
}

SurdMatrix operator-(const SurdMatrix& a, const SurdMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("shape mismatch in exact difference");
    SurdMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = surd_sub(a(i, j), b(i, j));
    return r;
}

SurdMatrix operator*(const SurdMatrix& a, const SurdMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("shape mismatch in exact product");
    SurdMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            SurdElem s;
            for (std::size_t k = 0; k < a.cols(); ++k)
                s = surd_add(s, surd_mul(a(i, k), b(k, j)));
            r(i, j) = s;
        }
    return r;
}

SurdMatrix operator*(const SurdElem& s, const SurdMatrix& m) {
    SurdMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = surd_mul(s, m(i, j));
    return r;
}

SurdMatrix exact_inverse(const SurdMatrix& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("exact_inverse needs a square matrix");
    const std::size_t n = a.rows();
    SurdMatrix w = a, inv = SurdMatrix::identity(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        while (piv < n && w(piv, k).is_zero()) ++piv;
        if (piv == n) throw SingularSystem("exactly singular matrix");
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(w(k, j), w(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        const SurdElem d = surd_inv(w(k, k));
        for (std::size_t j = 0; j < n; ++j) {
            w(k, j) = surd_mul(w(k, j), d);
            inv(k, j) = surd_mul(inv(k, j), d);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || w(i, k).is_zero()) continue;
            const SurdElem f = w(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                w(i, j) = surd_sub(w(i, j), surd_mul(f, w(k, j)));
                inv(i, j) = surd_sub(inv(i, j), surd_mul(f, inv(k, j)));
            }
        }
    }
    return inv;
}

SurdMatrix exact_cholesky(const SurdMatrix& x) {
    if (x.rows() != x.cols()) throw DimensionMismatch("exact_cholesky needs a square matrix");
    if (x != x.t()) throw DimensionMismatch("exact_cholesky needs a symmetric matrix");
    const std::size_t n = x.rows();
    SurdMatrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        SurdElem d = x(j, j);
        for (std::size_t k = 0; k < j; ++k) d = surd_sub(d, surd_mul(l(j, k), l(j, k)));
        if (surd_sign(d) <= 0) throw NotPositiveDefinite(j, to_float(d));
        l(j, j) = surd_sqrt(d);
        const SurdElem dinv = surd_inv(l(j, j));
        for (std::size_t i = j + 1; i < n; ++i) {
            SurdElem v = x(i, j);
            for (std::size_t k = 0; k < j; ++k) v = surd_sub(v, surd_mul(l(i, k), l(j, k)));
            l(i, j) = surd_mul(v, dinv);
        }
    }
    return l;
}

SurdElem exact_scalar_solve(const SurdElem& p0, const SurdElem& p1) {
    // larger root of x^2 - p0 x + p1^2 = 0
    const SurdElem four = surd_from_rational(4);
    const SurdElem disc = surd_sub(surd_mul(p0, p0), surd_mul(four, surd_mul(p1, p1)));
    const SurdElem root = surd_sqrt(disc);
    const SurdElem half = surd_from_rational(BigRational(1, 2));
    return surd_mul(half, surd_add(p0, root));
}

ExactVerifyFlags exact_verify(const SurdMatrix& p0, const SurdMatrix& p1,
                              const SurdMatrix& x, const SurdMatrix& h0,
                              const SurdMatrix& h1) {
    ExactVerifyFlags flags;
    const SurdMatrix xinv = exact_inverse(x);
    flags.nme_ok = (x == p0 - p1.t() * xinv * p1);
    flags.product_ok = (p0 == h0 * h0.t() + h1 * h1.t());
    flags.cross_ok = (p1 == h0 * h1.t());
    bool lower = true;
    for (std::size_t i = 0; i < h0.rows() && lower; ++i) {
        for (std::size_t j = i + 1; j < h0.cols(); ++j)
            if (!h0(i, j).is_zero()) {
                lower = false;
                break;
            }
        if (surd_sign(h0(i, i)) <= 0) lower = false;
    }
    flags.cholesky_ok = lower && (h0 * h0.t() == x);
    return flags;
}

DenseMatrix to_dense(const SurdMatrix& a) {
    DenseMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = to_float(a(i, j));
    return m;
}

}  // namespace msf
