#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "entropik/field.hpp"

namespace entropik {

// Coefficient rings for MultiPoly.

struct FpRing {
    using Elem = u64;
    PrimeField f;
    explicit FpRing(const PrimeField& field) : f(field) {}
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(const Elem& a) const { return a == 0; }
    Elem add(const Elem& a, const Elem& b) const { return f.add(a, b); }
    Elem sub(const Elem& a, const Elem& b) const { return f.sub(a, b); }
    Elem mul(const Elem& a, const Elem& b) const { return f.mul(a, b); }
    Elem neg(const Elem& a) const { return f.neg(a); }
    Elem from_int(long long v) const { return f.reduce_int(v); }
    bool invertible(const Elem& a) const { return a != 0; }
    Elem inv(const Elem& a) const { return f.inv(a); }
    bool same(const FpRing& o) const { return f.modulus() == o.f.modulus(); }
};

struct RatRing {
    using Elem = mpq_class;
    Elem zero() const { return mpq_class(0); }
    Elem one() const { return mpq_class(1); }
    bool is_zero(const Elem& a) const { return sgn(a) == 0; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem from_int(long long v) const { return mpq_class((long)v); }
    bool invertible(const Elem& a) const { return sgn(a) != 0; }
    Elem inv(const Elem& a) const { return 1 / a; }
    bool same(const RatRing&) const { return true; }
};

// Sparse multivariate polynomial with packed exponent keys.  Terms are kept
// sorted by key (lex order, last variable most significant), no zero
// coefficients stored.  Exponents are packed into a 128-bit key with
// bits_per_var = min(16, 128/nvars), so up to 128 variables (multilinear)
// and exponents up to 2^16-1 for few-variable polynomials.
template <class Ring>
class MultiPoly {
public:
    using Elem = typename Ring::Elem;
    using Key = u128;
    using Term = std::pair<Key, Elem>;

    MultiPoly(const Ring& ring, int nvars) : ring_(ring), nvars_(nvars) {
        if (nvars < 1 || nvars > 128) throw std::invalid_argument("MultiPoly: nvars out of range");
        bits_ = std::min(16, 128 / nvars);
        if (bits_ < 1) throw std::invalid_argument("MultiPoly: too many variables");
        mask_ = (bits_ >= 64) ? ~(u64)0 : (((u64)1 << bits_) - 1);
    }

    static MultiPoly constant(const Ring& r, int nvars, const Elem& c) {
        MultiPoly f(r, nvars);
        if (!r.is_zero(c)) f.terms_.push_back({0, c});
        return f;
    }
    static MultiPoly variable(const Ring& r, int nvars, int i) {
        MultiPoly f(r, nvars);
        f.terms_.push_back({f.key_unit(i), r.one()});
        return f;
    }
    static MultiPoly from_exponents(const Ring& r, int nvars, const std::vector<unsigned>& exps,
                                    const Elem& c) {
        MultiPoly f(r, nvars);
        if (!r.is_zero(c)) f.terms_.push_back({f.pack(exps), c});
        return f;
    }

    const Ring& ring() const { return ring_; }
    int nvars() const { return nvars_; }
    int bits_per_var() const { return bits_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    Key key_unit(int i) const {
        if (i < 0 || i >= nvars_) throw std::out_of_range("MultiPoly: variable index");
        return (Key)1 << (bits_ * i);
    }
    unsigned exp_of(Key k, int i) const { return (unsigned)((k >> (bits_ * i)) & mask_); }
    Key pack(const std::vector<unsigned>& exps) const {
        if ((int)exps.size() != nvars_) throw std::invalid_argument("MultiPoly: exponent arity");
        Key k = 0;
        for (int i = nvars_ - 1; i >= 0; --i) {
            if (exps[i] > mask_) throw std::overflow_error("MultiPoly: exponent exceeds packing width");
            k = (k << bits_) | exps[i];
        }
        return k;
    }
    std::vector<unsigned> unpack(Key k) const {
        std::vector<unsigned> e(nvars_);
        for (int i = 0; i < nvars_; ++i) e[i] = exp_of(k, i);
        return e;
    }
    unsigned total_degree_of(Key k) const {
        unsigned d = 0;
        for (int i = 0; i < nvars_; ++i) d += exp_of(k, i);
        return d;
    }

    long long degree() const {  // max total degree, -1 for zero
        long long d = -1;
        for (const auto& t : terms_) d = std::max(d, (long long)total_degree_of(t.first));
        return d;
    }
    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        unsigned d = total_degree_of(terms_.front().first);
        for (const auto& t : terms_)
            if (total_degree_of(t.first) != d) return false;
        return true;
    }

    // Assumes `raw` may contain duplicates/zeros; sorts and combines.
    void assign_normalized(std::vector<Term> raw) {
        std::sort(raw.begin(), raw.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
        terms_.clear();
        for (auto& t : raw) {
            if (!terms_.empty() && terms_.back().first == t.first) {
                terms_.back().second = ring_.add(terms_.back().second, t.second);
                if (ring_.is_zero(terms_.back().second)) terms_.pop_back();
            } else if (!ring_.is_zero(t.second)) {
                terms_.push_back(std::move(t));
            }
        }
    }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& t : r.terms_) t.second = ring_.neg(t.second);
        return r;
    }

    friend MultiPoly add(const MultiPoly& a, const MultiPoly& b) {
        a.check_compatible(b);
        MultiPoly r(a.ring_, a.nvars_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j >= b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
                r.terms_.push_back(a.terms_[i++]);
            } else if (i >= a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
                r.terms_.push_back(b.terms_[j++]);
            } else {
                auto c = a.ring_.add(a.terms_[i].second, b.terms_[j].second);
                if (!a.ring_.is_zero(c)) r.terms_.push_back({a.terms_[i].first, c});
                ++i;
                ++j;
            }
        }
        return r;
    }
    friend MultiPoly sub(const MultiPoly& a, const MultiPoly& b) { return add(a, -b); }

    friend MultiPoly scale(const MultiPoly& a, const Elem& c) {
        MultiPoly r(a.ring_, a.nvars_);
        if (a.ring_.is_zero(c)) return r;
        r.terms_ = a.terms_;
        for (auto& t : r.terms_) t.second = a.ring_.mul(t.second, c);
        return r;
    }

    friend MultiPoly mul(const MultiPoly& a, const MultiPoly& b) {
        a.check_compatible(b);
        MultiPoly r(a.ring_, a.nvars_);
        if (a.is_zero() || b.is_zero()) return r;
        a.check_mul_overflow(b);
        // few-term operand: fold shifted sorted streams (no re-sort)
        const MultiPoly& big = a.terms_.size() >= b.terms_.size() ? a : b;
        const MultiPoly& small = a.terms_.size() >= b.terms_.size() ? b : a;
        if (small.terms_.size() <= 8) {
            for (const auto& ts : small.terms_) r = add(r, mul_term(big, ts.first, ts.second));
            return r;
        }
        std::vector<Term> raw;
        raw.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) raw.push_back({ta.first + tb.first, a.ring_.mul(ta.second, tb.second)});
        r.assign_normalized(std::move(raw));
        return r;
    }

    // Multiply by a single term.
    friend MultiPoly mul_term(const MultiPoly& a, Key k, const Elem& c) {
        MultiPoly r(a.ring_, a.nvars_);
        if (a.ring_.is_zero(c)) return r;
        r.terms_ = a.terms_;
        for (auto& t : r.terms_) {
            t.first += k;
            t.second = a.ring_.mul(t.second, c);
        }
        return r;
    }

    friend MultiPoly pow(const MultiPoly& a, unsigned e) {
        MultiPoly r = constant(a.ring_, a.nvars_, a.ring_.one());
        MultiPoly base = a;
        while (e) {
            if (e & 1) r = mul(r, base);
            if ((e >>= 1)) base = mul(base, base);
        }
        return r;
    }

    Elem eval(const std::vector<Elem>& x) const {
        if ((int)x.size() != nvars_) throw std::invalid_argument("MultiPoly::eval arity");
        Elem acc = ring_.zero();
        for (const auto& t : terms_) {
            Elem v = t.second;
            for (int i = 0; i < nvars_; ++i) {
                unsigned e = exp_of(t.first, i);
                for (unsigned k = 0; k < e; ++k) v = ring_.mul(v, x[i]);
            }
            acc = ring_.add(acc, v);
        }
        return acc;
    }

    // Largest monomial dividing every term (per-variable minimum exponent).
    std::vector<unsigned> content_monomial() const {
        if (terms_.empty()) throw std::domain_error("content_monomial: undefined for the zero polynomial");
        std::vector<unsigned> m(nvars_, ~0u);
        for (const auto& t : terms_)
            for (int i = 0; i < nvars_; ++i) m[i] = std::min(m[i], exp_of(t.first, i));
        return m;
    }

    MultiPoly divide_by_monomial(const std::vector<unsigned>& exps) const {
        Key k = pack(exps);
        MultiPoly r(ring_, nvars_);
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            for (int i = 0; i < nvars_; ++i)
                if (exp_of(t.first, i) < exps[i]) throw std::domain_error("divide_by_monomial: not divisible");
            r.terms_.push_back({t.first - k, t.second});
        }
        return r;
    }

    // Substitute the Hadamard-inverse monomials: for a homogeneous f of
    // degree d, x_k -> prod_{j != k} x_j maps each exponent vector e to
    // (d - e_0, ..., d - e_{n-1}).  Pure exponent relabeling.
    MultiPoly hadamard_flip() const {
        if (terms_.empty()) return *this;
        if (!is_homogeneous()) throw std::domain_error("hadamard_flip: polynomial not homogeneous");
        unsigned d = total_degree_of(terms_.front().first);
        if (d > mask_) throw std::overflow_error("hadamard_flip: exponent exceeds packing width");
        MultiPoly r(ring_, nvars_);
        std::vector<Term> raw;
        raw.reserve(terms_.size());
        Key full = 0;
        for (int i = 0; i < nvars_; ++i) full |= (Key)d << (bits_ * i);
        for (const auto& t : terms_) raw.push_back({full - t.first, t.second});
        r.assign_normalized(std::move(raw));
        return r;
    }

    // x_i -> sum_j C[i][j] x_j, by Horner recursion over variables.
    MultiPoly linear_change(const std::vector<std::vector<Elem>>& C) const {
        if ((int)C.size() != nvars_) throw std::invalid_argument("linear_change: matrix arity");
        std::vector<MultiPoly> forms;
        forms.reserve(nvars_);
        for (int i = 0; i < nvars_; ++i) {
            MultiPoly L(ring_, nvars_);
            std::vector<Term> raw;
            for (int j = 0; j < nvars_; ++j)
                if (!ring_.is_zero(C[i][j])) raw.push_back({key_unit(j), C[i][j]});
            L.assign_normalized(std::move(raw));
            forms.push_back(std::move(L));
        }
        return horner_subst(terms_, 0, forms);
    }

    // General substitution x_i -> images[i].
    MultiPoly substitute(const std::vector<MultiPoly>& images) const {
        if ((int)images.size() != nvars_) throw std::invalid_argument("substitute: image arity");
        for (const auto& g : images) check_compatible(g);
        return horner_subst(terms_, 0, images);
    }

    bool operator==(const MultiPoly& o) const {
        if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i].first != o.terms_[i].first) return false;
            if (!ring_.is_zero(ring_.sub(terms_[i].second, o.terms_[i].second))) return false;
        }
        return true;
    }

    std::string to_string(const std::string& var = "x") const {
        if (terms_.empty()) return "0";
        std::string s;
        for (std::size_t t = terms_.size(); t-- > 0;) {
            if (!s.empty()) s += " + ";
            s += coeff_str(terms_[t].second);
            for (int i = 0; i < nvars_; ++i) {
                unsigned e = exp_of(terms_[t].first, i);
                if (e) {
                    s += "*" + var + std::to_string(i);
                    if (e > 1) s += "^" + std::to_string(e);
                }
            }
        }
        return s;
    }

private:
    static std::string coeff_str(u64 c) { return std::to_string(c); }
    static std::string coeff_str(const mpq_class& c) { return c.get_str(); }

    void check_compatible(const MultiPoly& o) const {
        if (nvars_ != o.nvars_ || !ring_.same(o.ring_))
            throw std::invalid_argument("MultiPoly: incompatible operands");
    }
    void check_mul_overflow(const MultiPoly& o) const {
        for (int i = 0; i < nvars_; ++i) {
            unsigned ma = 0, mb = 0;
            for (const auto& t : terms_) ma = std::max(ma, exp_of(t.first, i));
            for (const auto& t : o.terms_) mb = std::max(mb, exp_of(t.first, i));
            if ((u64)ma + mb > mask_) throw std::overflow_error("MultiPoly: exponent overflow in mul");
        }
    }

    // Horner substitution over variables v, v+1, ...: split by exponent of
    // x_v, recurse, then fold with the image of x_v.
    MultiPoly horner_subst(const std::vector<Term>& ts, int v, const std::vector<MultiPoly>& images) const {
        if (ts.empty()) return MultiPoly(ring_, nvars_);
        if (v == nvars_) {
            MultiPoly r(ring_, nvars_);
            Elem c = ring_.zero();
            for (const auto& t : ts) c = ring_.add(c, t.second);
            if (!ring_.is_zero(c)) r.terms_.push_back({0, c});
            return r;
        }
        // group terms by exponent of x_v (strip that field from the key)
        std::vector<std::pair<unsigned, Term>> grouped;
        grouped.reserve(ts.size());
        Key strip = ~((Key)mask_ << (bits_ * v));
        for (const auto& t : ts) grouped.push_back({exp_of(t.first, v), {t.first & strip, t.second}});
        std::sort(grouped.begin(), grouped.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        MultiPoly acc(ring_, nvars_);
        std::size_t i = 0;
        unsigned prev_e = grouped.empty() ? 0 : grouped.front().first;
        bool first_group = true;
        while (i < grouped.size()) {
            unsigned e = grouped[i].first;
            std::vector<Term> slice;
            while (i < grouped.size() && grouped[i].first == e) slice.push_back(grouped[i++].second);
            MultiPoly part = horner_subst(slice, v + 1, images);
            if (first_group) {
                acc = std::move(part);
                first_group = false;
            } else {
                for (unsigned k = prev_e; k > e; --k) acc = mul(acc, images[v]);
                acc = add(acc, part);
            }
            prev_e = e;
        }
        for (unsigned k = prev_e; k > 0; --k) acc = mul(acc, images[v]);
        return acc;
    }

    Ring ring_;
    int nvars_;
    int bits_;
    u64 mask_;
    std::vector<Term> terms_;
};

using FpPoly = MultiPoly<FpRing>;
using RatPoly = MultiPoly<RatRing>;

// ---------------------------------------------------------------------------
// Primitive PRS gcd, generic over the coefficient ring (field or Q).
// Intended for the small polynomials arising from symbolic cofactors.
// ---------------------------------------------------------------------------

template <class Ring>
int mp_top_var(const MultiPoly<Ring>& f) {
    int top = -1;
    for (const auto& t : f.terms())
        for (int i = f.nvars() - 1; i > top; --i)
            if (f.exp_of(t.first, i) > 0) top = i;
    return top;
}

template <class Ring>
unsigned mp_deg_in(const MultiPoly<Ring>& f, int v) {
    unsigned d = 0;
    for (const auto& t : f.terms()) d = std::max(d, f.exp_of(t.first, v));
    return d;
}

template <class Ring>
MultiPoly<Ring> mp_coeff_of(const MultiPoly<Ring>& f, int v, unsigned e) {
    MultiPoly<Ring> r(f.ring(), f.nvars());
    std::vector<typename MultiPoly<Ring>::Term> raw;
    u128 strip = ~((u128)((1ull << f.bits_per_var()) - 1) << (f.bits_per_var() * v));
    for (const auto& t : f.terms())
        if (f.exp_of(t.first, v) == e) raw.push_back({t.first & strip, t.second});
    r.assign_normalized(std::move(raw));
    return r;
}

// Scale to the ring's canonical unit-normal form (monic leading coefficient
// for fields; coprime integer coefficients with positive trailing term for Q).
inline MultiPoly<FpRing> mp_unit_normalize(const MultiPoly<FpRing>& f) {
    if (f.is_zero()) return f;
    return scale(f, f.ring().inv(f.terms().back().second));
}
inline MultiPoly<RatRing> mp_unit_normalize(const MultiPoly<RatRing>& f) {
    if (f.is_zero()) return f;
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& t : f.terms()) {
        mpz_class n = t.second.get_num(), d = t.second.get_den();
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
    }
    mpq_class s(den_lcm, num_gcd);
    s.canonicalize();
    auto g = scale(f, s);
    if (sgn(g.terms().front().second) < 0) g = scale(g, mpq_class(-1));
    return g;
}

template <class Ring>
MultiPoly<Ring> exact_divide(const MultiPoly<Ring>& f, const MultiPoly<Ring>& g);

template <class Ring>
MultiPoly<Ring> mp_gcd(MultiPoly<Ring> f, MultiPoly<Ring> g);

template <class Ring>
MultiPoly<Ring> mp_content_wrt(const MultiPoly<Ring>& f, int v) {
    MultiPoly<Ring> c(f.ring(), f.nvars());
    unsigned d = mp_deg_in(f, v);
    for (unsigned e = 0; e <= d; ++e) {
        auto coef = mp_coeff_of(f, v, e);
        if (!coef.is_zero()) c = c.is_zero() ? coef : mp_gcd(c, coef);
        if (!c.is_zero() && c.degree() == 0) break;
    }
    return c;
}

template <class Ring>
MultiPoly<Ring> mp_gcd(MultiPoly<Ring> f, MultiPoly<Ring> g) {
    using MP = MultiPoly<Ring>;
    if (f.is_zero()) return mp_unit_normalize(g);
    if (g.is_zero()) return mp_unit_normalize(f);
    int v = std::max(mp_top_var(f), mp_top_var(g));
    if (v < 0) return MP::constant(f.ring(), f.nvars(), f.ring().one());
    MP cf = mp_content_wrt(f, v), cg = mp_content_wrt(g, v);
    MP c = mp_gcd(cf, cg);
    MP pf = mp_unit_normalize(exact_divide(f, cf));
    MP pg = mp_unit_normalize(exact_divide(g, cg));
    while (true) {
        unsigned df = mp_deg_in(pf, v), dg = mp_deg_in(pg, v);
        if (df < dg) {
            std::swap(pf, pg);
            std::swap(df, dg);
        }
        if (pg.is_zero()) break;
        MP r = pf;
        MP lg = mp_coeff_of(pg, v, dg);
        MP xv = MP::variable(f.ring(), f.nvars(), v);
        while (!r.is_zero() && mp_deg_in(r, v) >= dg) {
            unsigned dr = mp_deg_in(r, v);
            MP lr = mp_coeff_of(r, v, dr);
            MP shift = mul(lr, pg);
            if (dr > dg) shift = mul(shift, pow(xv, dr - dg));
            r = sub(mul(r, lg), shift);
        }
        pf = std::move(pg);
        if (!r.is_zero()) {
            auto cr = mp_content_wrt(r, v);
            r = mp_unit_normalize(exact_divide(r, cr));
        }
        pg = std::move(r);
    }
    return mp_unit_normalize(mul(c, pf));
}

// All exponent vectors in `nvars` variables of total degree d.
inline void homogeneous_exponents(int nvars, unsigned d, std::vector<std::vector<unsigned>>& out,
                                  std::vector<unsigned>& cur, int var = 0) {
    if (var == nvars - 1) {
        cur[var] = d;
        out.push_back(cur);
        return;
    }
    for (unsigned e = 0; e <= d; ++e) {
        cur[var] = e;
        homogeneous_exponents(nvars, d - e, out, cur, var + 1);
    }
}
inline std::vector<std::vector<unsigned>> homogeneous_exponents(int nvars, unsigned d) {
    std::vector<std::vector<unsigned>> out;
    std::vector<unsigned> cur(nvars);
    homogeneous_exponents(nvars, d, out, cur);
    return out;
}

// gcd of two homogeneous polynomials over F_p with KNOWN gcd degree dh:
// solve a*F = b*G with deg a = deg G - dh, deg b = deg F - dh; any nontrivial
// solution has b = const * F/h, so h = F/b up to scale.  Returns the zero
// polynomial when no solution exists (dh too large) or inputs are unusable.
inline MultiPoly<FpRing> fp_homog_pair_gcd(const MultiPoly<FpRing>& F, const MultiPoly<FpRing>& G,
                                           long long dh) {
    using MP = MultiPoly<FpRing>;
    const FpRing& R = F.ring();
    const PrimeField& fld = R.f;
    int nv = F.nvars();
    if (F.is_zero() || G.is_zero() || !F.is_homogeneous() || !G.is_homogeneous()) return MP(R, nv);
    long long df = F.degree(), dg = G.degree();
    if (dh < 0 || dh > std::min(df, dg)) return MP(R, nv);
    if (dh == 0) return MP::constant(R, nv, 1);
    auto amons = homogeneous_exponents(nv, (unsigned)(dg - dh));
    auto bmons = homogeneous_exponents(nv, (unsigned)(df - dh));
    auto rmons = homogeneous_exponents(nv, (unsigned)(df + dg - dh));
    std::map<u128, std::size_t> rindex;
    for (std::size_t i = 0; i < rmons.size(); ++i) rindex[F.pack(rmons[i])] = i;
    std::size_t rows = rmons.size(), cols = amons.size() + bmons.size();
    std::vector<std::vector<u64>> mat(rows, std::vector<u64>(cols, 0));
    for (std::size_t c = 0; c < amons.size(); ++c) {
        u128 ak = F.pack(amons[c]);
        for (const auto& t : F.terms()) mat[rindex.at(ak + t.first)][c] = fld.add(mat[rindex.at(ak + t.first)][c], t.second);
    }
    for (std::size_t c = 0; c < bmons.size(); ++c) {
        u128 bk = G.pack(bmons[c]);
        for (const auto& t : G.terms()) {
            auto& cell = mat[rindex.at(bk + t.first)][amons.size() + c];
            cell = fld.sub(cell, t.second);
        }
    }
    // nullspace vector by Gaussian elimination
    std::vector<long long> pivot_of_col(cols, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pr = r;
        while (pr < rows && mat[pr][c] == 0) ++pr;
        if (pr == rows) continue;
        std::swap(mat[pr], mat[r]);
        u64 inv = fld.inv(mat[r][c]);
        for (std::size_t j = c; j < cols; ++j) mat[r][j] = fld.mul(mat[r][j], inv);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || mat[i][c] == 0) continue;
            u64 f = mat[i][c];
            for (std::size_t j = c; j < cols; ++j) mat[i][j] = fld.sub(mat[i][j], fld.mul(f, mat[r][j]));
        }
        pivot_of_col[c] = (long long)r;
        ++r;
    }
    long long free_col = -1;
    for (std::size_t c = 0; c < cols; ++c)
        if (pivot_of_col[c] < 0) {
            free_col = (long long)c;
            break;
        }
    if (free_col < 0) return MP(R, nv);  // only the trivial solution
    std::vector<u64> sol(cols, 0);
    sol[(std::size_t)free_col] = 1;
    for (std::size_t c = 0; c < cols; ++c)
        if (pivot_of_col[c] >= 0) sol[c] = fld.neg(mat[(std::size_t)pivot_of_col[c]][(std::size_t)free_col]);
    MP b(R, nv);
    std::vector<typename MP::Term> raw;
    for (std::size_t c = 0; c < bmons.size(); ++c)
        if (sol[amons.size() + c]) raw.push_back({G.pack(bmons[c]), sol[amons.size() + c]});
    b.assign_normalized(std::move(raw));
    if (b.is_zero()) return MP(R, nv);
    try {
        MP h = exact_divide(F, b);
        exact_divide(G, h);  // verify divisibility of the other input
        return mp_unit_normalize(h);
    } catch (const std::domain_error&) {
        return MP(R, nv);
    }
}

// Exact division f / g (throws if not exact), by leading-term elimination in
// the packed-key order.  Intended for small operands.
template <class Ring>
MultiPoly<Ring> exact_divide(const MultiPoly<Ring>& f, const MultiPoly<Ring>& g) {
    using MP = MultiPoly<Ring>;
    const Ring& R = f.ring();
    if (g.is_zero()) throw std::domain_error("exact_divide: zero divisor");
    MP rem = f;
    MP quot(R, f.nvars());
    const auto& glead = g.terms().back();
    if (!R.invertible(glead.second)) throw std::domain_error("exact_divide: leading coefficient not invertible");
    auto ginv = R.inv(glead.second);
    std::vector<typename MP::Term> qterms;
    while (!rem.is_zero()) {
        const auto& rlead = rem.terms().back();
        // check divisibility of the leading monomials per variable
        for (int i = 0; i < f.nvars(); ++i)
            if (rem.exp_of(rlead.first, i) < g.exp_of(glead.first, i))
                throw std::domain_error("exact_divide: not divisible");
        typename MP::Key qk = rlead.first - glead.first;
        auto qc = R.mul(rlead.second, ginv);
        qterms.push_back({qk, qc});
        rem = sub(rem, mul_term(g, qk, qc));
    }
    quot.assign_normalized(std::move(qterms));
    return quot;
}

}  // namespace entropik
