#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace entropik {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return (u128)a * b % m; }

inline u64 powmod_u64(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all n < 2^64.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> fs;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

// Prime field Z/pZ, p odd prime < 2^63.  Optionally carries a verified
// primitive root of unity of a requested order (for the C-matrix arithmetic).
class PrimeField {
public:
    PrimeField() = default;

    explicit PrimeField(u64 modulus, u64 root_order = 0, u64 root = 0)
        : p_(modulus), root_order_(root_order), root_(root) {
        if (!is_prime_u64(modulus)) throw std::invalid_argument("PrimeField: modulus not prime");
        if (modulus >> 63) throw std::invalid_argument("PrimeField: modulus must be < 2^63");
        if (root_order > 0) verify_root();
    }

    u64 modulus() const { return p_; }
    u64 root_order() const { return root_order_; }
    u64 root() const { return root_; }

    u64 reduce_int(long long v) const {
        long long m = v % (long long)p_;
        return m < 0 ? (u64)(m + (long long)p_) : (u64)m;
    }

    u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p_ ? s - p_ : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p_ - b; }
    u64 neg(u64 a) const { return a ? p_ - a : 0; }
    u64 mul(u64 a, u64 b) const { return mulmod_u64(a, b, p_); }
    u64 pow(u64 a, u64 e) const { return powmod_u64(a, e, p_); }

    u64 inv(u64 a) const {
        if (a == 0) throw std::domain_error("PrimeField: inverse of zero");
        return powmod_u64(a, p_ - 2, p_);
    }

    // omega^k with k possibly negative mod root_order
    u64 root_pow(long long k) const {
        if (root_order_ == 0) throw std::logic_error("PrimeField: no root of unity attached");
        long long q = (long long)root_order_;
        long long e = ((k % q) + q) % q;
        return powmod_u64(root_, (u64)e, p_);
    }

    // Largest s with 2^s | p-1 (usable NTT length is 2^s).
    int two_adicity() const {
        u64 m = p_ - 1;
        int s = 0;
        while ((m & 1) == 0) { m >>= 1; ++s; }
        return s;
    }

    // Symmetric lift to (-p/2, p/2], handy for recognizing small integers.
    long long lift_signed(u64 a) const {
        return a > p_ / 2 ? (long long)a - (long long)p_ : (long long)a;
    }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }

private:
    void verify_root() {
        if (root_ == 0 || powmod_u64(root_, root_order_, p_) != 1)
            throw std::invalid_argument("PrimeField: root fails omega^q = 1");
        for (u64 f : prime_factors(root_order_)) {
            if (powmod_u64(root_, root_order_ / f, p_) == 1)
                throw std::invalid_argument("PrimeField: root has smaller order");
        }
    }

    u64 p_ = 2;
    u64 root_order_ = 0;
    u64 root_ = 0;
};

// Element of order exactly `order` in F_p (requires order | p-1).
inline u64 element_of_order(u64 p, u64 order) {
    if ((p - 1) % order != 0) throw std::invalid_argument("element_of_order: order does not divide p-1");
    auto fs = prime_factors(order);
    u64 cofactor = (p - 1) / order;
    for (u64 g = 2; g < p; ++g) {
        u64 w = powmod_u64(g, cofactor, p);
        if (w == 1) continue;
        bool ok = true;
        for (u64 f : fs) {
            if (powmod_u64(w, order / f, p) == 1) { ok = false; break; }
        }
        if (ok) return w;
    }
    throw std::runtime_error("element_of_order: search failed");
}

// Smallest prime p >= 2^min_bits with p = 1 (mod q * 2^two_adic), together
// with a verified primitive q-th root of unity.  `index` skips to the
// index-th such prime so independent trials get independent fields.
inline PrimeField find_field_with_root(u64 q, int min_bits, int two_adic = 1, int index = 0) {
    if (q < 2) throw std::invalid_argument("find_field_with_root: q must be >= 2");
    if (min_bits < 2) min_bits = 2;
    if (min_bits > 62) throw std::invalid_argument("find_field_with_root: min_bits too large");
    u128 step = (u128)q << two_adic;
    if (step >= ((u128)1 << 63)) throw std::invalid_argument("find_field_with_root: q * 2^two_adic too large");
    u64 lo = 1ull << min_bits;
    u64 k = (lo + (u64)step - 1) / (u64)step;
    if (k == 0) k = 1;
    const u64 cap = 4'000'000;
    for (u64 tries = 0; tries < cap; ++tries, ++k) {
        u128 cand = (u128)k * step + 1;
        if (cand >= ((u128)1 << 63)) break;
        u64 p = (u64)cand;
        if (p < lo || !is_prime_u64(p)) continue;
        if (index > 0) { --index; continue; }
        u64 w = element_of_order(p, q);
        return PrimeField(p, q, w);
    }
    throw std::runtime_error("find_field_with_root: search cap exceeded for q=" + std::to_string(q));
}

}  // namespace entropik
