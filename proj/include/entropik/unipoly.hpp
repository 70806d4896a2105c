#pragma once

#include <cassert>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entropik/field.hpp"
#include "entropik/ntt.hpp"
#include "entropik/rng.hpp"

namespace entropik {

// Dense univariate polynomial over a prime field, lowest degree first.
// Invariant: no trailing zero coefficients; the zero polynomial has an
// empty coefficient vector and degree -1.
class UniPoly {
public:
    explicit UniPoly(const PrimeField& f) : field_(f) {}
    UniPoly(const PrimeField& f, std::vector<u64> coeffs) : field_(f), c_(std::move(coeffs)) { trim(); }

    static UniPoly constant(const PrimeField& f, u64 v) {
        UniPoly r(f);
        if (v % f.modulus()) r.c_ = {v % f.modulus()};
        return r;
    }
    static UniPoly monomial(const PrimeField& f, std::size_t deg, u64 v = 1) {
        UniPoly r(f);
        if (v % f.modulus()) {
            r.c_.assign(deg + 1, 0);
            r.c_[deg] = v % f.modulus();
        }
        return r;
    }

    const PrimeField& field() const { return field_; }
    bool is_zero() const { return c_.empty(); }
    long long degree() const { return (long long)c_.size() - 1; }
    std::size_t size() const { return c_.size(); }
    u64 coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    u64 leading() const { return c_.empty() ? 0 : c_.back(); }
    const std::vector<u64>& coeffs() const { return c_; }
    std::vector<u64>& raw() { return c_; }
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    u64 eval(u64 x) const {
        u64 r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = field_.add(field_.mul(r, x), c_[i]);
        return r;
    }

    bool operator==(const UniPoly& o) const { return field_.modulus() == o.field_.modulus() && c_ == o.c_; }

private:
    PrimeField field_;
    std::vector<u64> c_;
};

namespace detail {
// Per-thread NTT engine cache keyed by modulus.
inline NttEngine& ntt_for(const PrimeField& f) {
    thread_local std::map<u64, std::unique_ptr<NttEngine>> cache;
    auto& slot = cache[f.modulus()];
    if (!slot) slot = std::make_unique<NttEngine>(f);
    return *slot;
}
inline bool ntt_usable(const PrimeField& f, std::size_t rlen) {
    return f.modulus() < (1ull << 62) && NttEngine::length_lg(rlen) <= f.two_adicity();
}
inline void check_same_field(const UniPoly& a, const UniPoly& b) {
    if (a.field().modulus() != b.field().modulus())
        throw std::invalid_argument("UniPoly: mixed fields");
}
}  // namespace detail

inline UniPoly add(const UniPoly& a, const UniPoly& b) {
    detail::check_same_field(a, b);
    const auto& f = a.field();
    std::vector<u64> r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a.coeff(i);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.add(r[i], b.coeff(i));
    return UniPoly(f, std::move(r));
}

inline UniPoly sub(const UniPoly& a, const UniPoly& b) {
    detail::check_same_field(a, b);
    const auto& f = a.field();
    std::vector<u64> r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a.coeff(i);
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.sub(r[i], b.coeff(i));
    return UniPoly(f, std::move(r));
}

inline UniPoly scale(const UniPoly& a, u64 c) {
    const auto& f = a.field();
    c %= f.modulus();
    if (c == 0) return UniPoly(f);
    std::vector<u64> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a.coeff(i), c);
    return UniPoly(f, std::move(r));
}

// a * x^k
inline UniPoly shift_up(const UniPoly& a, std::size_t k) {
    if (a.is_zero()) return a;
    std::vector<u64> r(a.size() + k, 0);
    std::copy(a.coeffs().begin(), a.coeffs().end(), r.begin() + (long)k);
    return UniPoly(a.field(), std::move(r));
}

// a div x^k (drop the k lowest coefficients)
inline UniPoly shift_down(const UniPoly& a, std::size_t k) {
    if (k >= a.size()) return UniPoly(a.field());
    return UniPoly(a.field(), std::vector<u64>(a.coeffs().begin() + (long)k, a.coeffs().end()));
}

// a mod x^k
inline UniPoly low_part(const UniPoly& a, std::size_t k) {
    if (k >= a.size()) return a;
    return UniPoly(a.field(), std::vector<u64>(a.coeffs().begin(), a.coeffs().begin() + (long)k));
}

inline UniPoly reverse_poly(const UniPoly& a) {
    std::vector<u64> r(a.coeffs().rbegin(), a.coeffs().rend());
    return UniPoly(a.field(), std::move(r));
}

namespace detail {
inline std::vector<u64> mul_naive(const PrimeField& f, const std::vector<u64>& a, const std::vector<u64>& b) {
    std::vector<u64> r(a.size() + b.size() - 1, 0);
    u64 p = f.modulus();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            r[i + j] = (r[i + j] + (u128)a[i] * b[j]) % p;
        }
    }
    return r;
}
}  // namespace detail

inline UniPoly mul(const UniPoly& a, const UniPoly& b) {
    detail::check_same_field(a, b);
    const auto& f = a.field();
    if (a.is_zero() || b.is_zero()) return UniPoly(f);
    std::size_t rlen = a.size() + b.size() - 1;
    if (std::min(a.size(), b.size()) <= 32 || !detail::ntt_usable(f, rlen))
        return UniPoly(f, detail::mul_naive(f, a.coeffs(), b.coeffs()));
    return UniPoly(f, detail::ntt_for(f).convolve(a.coeffs(), b.coeffs()));
}

// (a*b) mod x^k, computed on truncated operands.
inline UniPoly mul_low(const UniPoly& a, const UniPoly& b, std::size_t k) {
    return low_part(mul(low_part(a, k), low_part(b, k)), k);
}

inline UniPoly monic(const UniPoly& a) {
    if (a.is_zero()) return a;
    return scale(a, a.field().inv(a.leading()));
}

// Inverse power series of f mod x^k (requires f(0) != 0), by Newton iteration.
inline UniPoly series_inverse(const UniPoly& f, std::size_t k) {
    const auto& fl = f.field();
    if (f.is_zero() || f.coeff(0) == 0) throw std::domain_error("series_inverse: constant term is zero");
    UniPoly g = UniPoly::constant(fl, fl.inv(f.coeff(0)));
    std::size_t t = 1;
    while (t < k) {
        t = std::min(t * 2, k);
        UniPoly fg = mul_low(f, g, t);
        UniPoly two_minus = sub(UniPoly::constant(fl, 2), fg);
        g = mul_low(g, two_minus, t);
    }
    return low_part(g, k);
}

namespace detail {
inline void divrem_naive(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r) {
    const auto& f = a.field();
    std::vector<u64> rem(a.coeffs());
    long long db = b.degree();
    u64 lead_inv = f.inv(b.leading());
    if ((long long)rem.size() - 1 < db) {
        q = UniPoly(f);
        r = a;
        return;
    }
    std::vector<u64> quot(rem.size() - db, 0);
    u64 p = f.modulus();
    for (long long i = (long long)rem.size() - 1; i >= db; --i) {
        u64 c = mulmod_u64(rem[i], lead_inv, p);
        if (c == 0) continue;
        quot[i - db] = c;
        for (long long j = 0; j <= db; ++j) {
            u64 t = mulmod_u64(c, b.coeff(j), p);
            rem[i - db + j] = f.sub(rem[i - db + j], t);
        }
    }
    q = UniPoly(f, std::move(quot));
    rem.resize(db >= 0 ? db : 0);
    r = UniPoly(f, std::move(rem));
}
}  // namespace detail

inline void divrem(const UniPoly& a, const UniPoly& b, UniPoly& q, UniPoly& r) {
    detail::check_same_field(a, b);
    if (b.is_zero()) throw std::domain_error("divrem: division by zero polynomial");
    const auto& f = a.field();
    if (a.degree() < b.degree()) {
        q = UniPoly(f);
        r = a;
        return;
    }
    std::size_t qlen = (std::size_t)(a.degree() - b.degree() + 1);
    if (qlen <= 128 || b.size() <= 128 || !detail::ntt_usable(f, 2 * std::max(qlen, a.size()))) {
        detail::divrem_naive(a, b, q, r);
        return;
    }
    UniPoly rb = reverse_poly(b);
    UniPoly ib = series_inverse(rb, qlen);
    UniPoly rq = mul_low(reverse_poly(a), ib, qlen);
    std::vector<u64> qc(qlen, 0);
    for (std::size_t i = 0; i < qlen; ++i) qc[i] = rq.coeff(qlen - 1 - i);
    q = UniPoly(f, std::move(qc));
    // deg r < deg b, so only the low part of b*q is needed
    std::size_t m = (std::size_t)b.degree();
    r = sub(low_part(a, m), mul_low(b, q, m));
}

inline UniPoly exact_div(const UniPoly& a, const UniPoly& b) {
    UniPoly q(a.field()), r(a.field());
    divrem(a, b, q, r);
    if (!r.is_zero()) throw std::domain_error("exact_div: division is not exact");
    return q;
}

// ---------------------------------------------------------------------------
// GCD: classical Euclid for small inputs, half-gcd for large ones.
//
// All reduction matrices are products of [[0,1],[1,-q]] steps, which are
// unimodular over F_p[x]; applying them never changes the gcd.  The degree
// thresholds below only steer performance, so every path ends in a plain
// Euclid finish and the result is correct regardless of truncation behavior.
// ---------------------------------------------------------------------------

namespace detail {

struct Mat22 {
    UniPoly m00, m01, m10, m11;
    explicit Mat22(const PrimeField& f)
        : m00(UniPoly::constant(f, 1)), m01(f), m10(f), m11(UniPoly::constant(f, 1)) {}
};

inline long long mat_max_deg(const Mat22& m) {
    return std::max(std::max(m.m00.degree(), m.m01.degree()), std::max(m.m10.degree(), m.m11.degree()));
}

// r = a . b with one shared set of forward transforms when profitable.
inline Mat22 mat_mul(const Mat22& a, const Mat22& b) {
    const auto& f = a.m00.field();
    long long da = mat_max_deg(a), db = mat_max_deg(b);
    std::size_t rlen = (std::size_t)std::max(da + db + 1, 1LL);
    if (da < 200 || db < 200 || !ntt_usable(f, rlen)) {
        Mat22 r(f);
        r.m00 = add(mul(a.m00, b.m00), mul(a.m01, b.m10));
        r.m01 = add(mul(a.m00, b.m01), mul(a.m01, b.m11));
        r.m10 = add(mul(a.m10, b.m00), mul(a.m11, b.m10));
        r.m11 = add(mul(a.m10, b.m01), mul(a.m11, b.m11));
        return r;
    }
    auto& eng = ntt_for(f);
    int lg = NttEngine::length_lg(rlen);
    auto t = [&](const UniPoly& x) { return eng.fwd_transform(x.coeffs(), lg); };
    auto A00 = t(a.m00), A01 = t(a.m01), A10 = t(a.m10), A11 = t(a.m11);
    auto B00 = t(b.m00), B01 = t(b.m01), B10 = t(b.m10), B11 = t(b.m11);
    Mat22 r(f);
    auto combine = [&](const std::vector<u64>& x0, const std::vector<u64>& y0, const std::vector<u64>& x1,
                       const std::vector<u64>& y1) {
        auto acc = eng.pw_mul(x0, y0);
        eng.pw_mul_add(acc, x1, y1);
        return UniPoly(f, eng.inv_transform(std::move(acc), rlen));
    };
    r.m00 = combine(A00, B00, A01, B10);
    r.m01 = combine(A00, B01, A01, B11);
    r.m10 = combine(A10, B00, A11, B10);
    r.m11 = combine(A10, B01, A11, B11);
    return r;
}

// (a, b) <- m . (a, b), sharing transforms of a and b.
inline void mat_apply(const Mat22& m, UniPoly& a, UniPoly& b) {
    const auto& f = a.field();
    long long dm = mat_max_deg(m);
    long long dv = std::max(a.degree(), b.degree());
    std::size_t rlen = (std::size_t)std::max(dm + dv + 1, 1LL);
    if (dm < 200 || dv < 200 || !ntt_usable(f, rlen)) {
        UniPoly na = add(mul(m.m00, a), mul(m.m01, b));
        UniPoly nb = add(mul(m.m10, a), mul(m.m11, b));
        a = std::move(na);
        b = std::move(nb);
        return;
    }
    auto& eng = ntt_for(f);
    int lg = NttEngine::length_lg(rlen);
    auto t = [&](const UniPoly& x) { return eng.fwd_transform(x.coeffs(), lg); };
    auto A = t(a), B = t(b);
    auto M00 = t(m.m00), M01 = t(m.m01), M10 = t(m.m10), M11 = t(m.m11);
    auto acc0 = eng.pw_mul(M00, A);
    eng.pw_mul_add(acc0, M01, B);
    auto acc1 = eng.pw_mul(M10, A);
    eng.pw_mul_add(acc1, M11, B);
    a = UniPoly(f, eng.inv_transform(std::move(acc0), rlen));
    b = UniPoly(f, eng.inv_transform(std::move(acc1), rlen));
}

// Left-multiply m by the quotient step [[0,1],[1,-q]].
inline void mat_push_quotient(Mat22& m, const UniPoly& q) {
    UniPoly n00 = m.m10;
    UniPoly n01 = m.m11;
    UniPoly n10 = sub(m.m00, mul(q, m.m10));
    UniPoly n11 = sub(m.m01, mul(q, m.m11));
    m.m00 = std::move(n00);
    m.m01 = std::move(n01);
    m.m10 = std::move(n10);
    m.m11 = std::move(n11);
}

// Euclid steps until deg b < bound; transforms (a, b) in place.
inline Mat22 euclid_reduce(UniPoly& a, UniPoly& b, long long bound, bool need_matrix = true) {
    Mat22 m(a.field());
    UniPoly q(a.field()), r(a.field());
    while (!b.is_zero() && b.degree() >= bound) {
        divrem(a, b, q, r);
        if (need_matrix) mat_push_quotient(m, q);
        a = std::move(b);
        b = std::move(r);
    }
    return m;
}

inline int hgcd_cutoff_deg = 512;  // tests lower this to stress the recursion

inline Mat22 hgcd(UniPoly& a, UniPoly& b, bool need_matrix);

// (a, b) <- M . (a, b) where the transformed high parts (a >> k, b >> k) are
// already known; only the low parts still need the matrix.
inline void mat_apply_with_high(const Mat22& m, UniPoly& a, UniPoly& b, UniPoly&& ah, UniPoly&& bh,
                                std::size_t k) {
    UniPoly al = low_part(a, k), bl = low_part(b, k);
    mat_apply(m, al, bl);
    a = add(shift_up(ah, k), al);
    b = add(shift_up(bh, k), bl);
}

// Half-gcd: transforms (a, b) with deg a > deg b >= 0 so that on return
// deg a' >= ceil(n/2) > deg b' (n = input deg a).  Returns the applied
// matrix when need_matrix is set (identity placeholder otherwise).
inline Mat22 hgcd(UniPoly& a, UniPoly& b, bool need_matrix = true) {
    const long long n = a.degree();
    const long long m = (n + 1) / 2;
    const auto& f = a.field();
    if (b.is_zero() || b.degree() < m) return Mat22(f);
    if (n <= hgcd_cutoff_deg) return euclid_reduce(a, b, m, need_matrix);

    UniPoly ah = shift_down(a, (std::size_t)m);
    UniPoly bh = shift_down(b, (std::size_t)m);
    Mat22 m1 = hgcd(ah, bh, true);
    mat_apply_with_high(m1, a, b, std::move(ah), std::move(bh), (std::size_t)m);
    if (b.is_zero() || b.degree() < m) return m1;

    UniPoly q(f), r(f);
    divrem(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
    if (need_matrix) mat_push_quotient(m1, q);
    if (b.is_zero() || b.degree() < m) return m1;

    long long k = 2 * m - a.degree();
    if (k < 0) k = 0;
    UniPoly ah2 = shift_down(a, (std::size_t)k);
    UniPoly bh2 = shift_down(b, (std::size_t)k);
    Mat22 m2 = hgcd(ah2, bh2, true);
    mat_apply_with_high(m2, a, b, std::move(ah2), std::move(bh2), (std::size_t)k);
    Mat22 total = need_matrix ? mat_mul(m2, m1) : Mat22(f);
    if (!b.is_zero() && b.degree() >= m) {
        // abnormal remainder sequence; finish honestly
        Mat22 m3 = euclid_reduce(a, b, m, need_matrix);
        if (need_matrix) total = mat_mul(m3, total);
    }
    return total;
}

}  // namespace detail

// Monic greatest common divisor.
inline UniPoly gcd(UniPoly a, UniPoly b) {
    detail::check_same_field(a, b);
    if (a.is_zero()) return monic(b);
    if (b.is_zero()) return monic(a);
    if (a.degree() < b.degree()) std::swap(a, b);
    {
        UniPoly q(a.field()), r(a.field());
        divrem(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    while (!b.is_zero()) {
        if (a.degree() <= detail::hgcd_cutoff_deg) {
            UniPoly q(a.field()), r(a.field());
            while (!b.is_zero()) {
                divrem(a, b, q, r);
                a = std::move(b);
                b = std::move(r);
            }
            break;
        }
        detail::hgcd(a, b, false);
        if (b.is_zero()) break;
        UniPoly q(a.field()), r(a.field());
        divrem(a, b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

inline UniPoly lcm(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return UniPoly(a.field());
    return mul(exact_div(a, gcd(a, b)), b);
}

// Monic gcd of a family (the "content" of a component vector).
inline UniPoly content_of(const std::vector<UniPoly>& v) {
    if (v.empty()) throw std::invalid_argument("content_of: empty family");
    UniPoly g = v.front();
    for (std::size_t i = 1; i < v.size() && g.degree() != 0; ++i) g = gcd(g, v[i]);
    return monic(g);
}

inline UniPoly random_poly(const PrimeField& f, long long deg, Rng& rng) {
    if (deg < 0) return UniPoly(f);
    std::vector<u64> c((std::size_t)deg + 1);
    for (auto& x : c) x = rng.below(f.modulus());
    if (c.back() == 0) c.back() = 1 + rng.below(f.modulus() - 1);
    return UniPoly(f, std::move(c));
}

}  // namespace entropik
