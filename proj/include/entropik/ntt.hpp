#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "entropik/field.hpp"

namespace entropik {

// Montgomery arithmetic mod an odd p < 2^63 (R = 2^64).
struct Montgomery {
    u64 p = 0, pinv = 0, r1 = 0, r2 = 0;

    Montgomery() = default;
    explicit Montgomery(u64 mod) : p(mod) {
        u64 x = p;
        for (int i = 0; i < 5; ++i) x *= 2 - p * x;  // x = p^{-1} mod 2^64
        pinv = ~x + 1;                               // -p^{-1} mod 2^64
        r1 = (~(u64)0) % p + 1;                      // 2^64 mod p
        u128 r = ((u128)r1 * r1) % p;                // 2^128 mod p
        r2 = (u64)r;
    }

    u64 redc(u128 t) const {
        u64 m = (u64)t * pinv;
        u64 r = (u64)((t + (u128)m * p) >> 64);
        return r >= p ? r - p : r;
    }
    u64 to(u64 a) const { return redc((u128)a * r2); }
    u64 from(u64 a) const { return redc((u128)a); }
    u64 mul(u64 a, u64 b) const { return redc((u128)a * b); }
    u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= p ? s - p : s; }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + p - b; }
    u64 pow(u64 a, u64 e) const {
        u64 r = r1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
};

// Number-theoretic transform bound to one prime field, Harvey-style lazy
// butterflies with Shoup-precomputed twiddles.  Requires p < 2^62 and the
// transform length to divide the 2-part of p-1.  Frequency-domain vectors
// carry values in [0, 4p); pointwise products are Montgomery-reduced, and
// the inverse transform folds the 2^64 correction into its 1/n scaling.
class NttEngine {
public:
    explicit NttEngine(const PrimeField& f)
        : field_(f), mont_(f.modulus()), p_(f.modulus()), max_lg_(f.two_adicity()) {
        if (p_ >= (1ull << 62)) throw std::invalid_argument("NttEngine: modulus must be < 2^62");
    }

    const PrimeField& field() const { return field_; }
    int max_lg() const { return max_lg_; }

    static int length_lg(std::size_t rlen) {
        int lg = 0;
        while (((std::size_t)1 << lg) < rlen) ++lg;
        return lg;
    }

    // Forward transform of plain coefficients, padded to 2^lg.  Output is a
    // (bit-reversed-order) DFT; both transforms share that convention so
    // pointwise products line up.
    std::vector<u64> fwd_transform(const std::vector<u64>& coeffs, int lg) {
        if (lg > max_lg_) throw std::runtime_error("NttEngine: field 2-adicity too small for length");
        ensure_roots(lg);
        std::vector<u64> a(coeffs);
        a.resize((std::size_t)1 << lg, 0);
        fwd_dif(a);
        return a;
    }

    // c[i] = mont_redc(a[i] * b[i]); inputs lazy in [0,4p).
    std::vector<u64> pw_mul(const std::vector<u64>& a, const std::vector<u64>& b) const {
        std::vector<u64> c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = mont_.redc((u128)half(a[i]) * half(b[i]));
        return c;
    }
    void pw_mul_add(std::vector<u64>& acc, const std::vector<u64>& a, const std::vector<u64>& b) const {
        for (std::size_t i = 0; i < a.size(); ++i)
            acc[i] = mont_.add(acc[i], mont_.redc((u128)half(a[i]) * half(b[i])));
    }

    // Inverse transform of a pointwise-product vector; returns plain
    // coefficients truncated to rlen.
    std::vector<u64> inv_transform(std::vector<u64> freq, std::size_t rlen) {
        std::size_t n = freq.size();
        inv_dit(freq);
        u64 ninv = powmod_u64((u64)n, p_ - 2, p_);
        u64 s = mulmod_u64(ninv, mont_.r1, p_);  // undo the single redc
        u64 s_sh = shoup_of(s);
        if (rlen < freq.size()) freq.resize(rlen);
        for (auto& x : freq) {
            u64 v = shoup_mul(x, s, s_sh);
            x = v >= p_ ? v - p_ : v;
        }
        freq.resize(rlen, 0);
        return freq;
    }

    // Convenience full product of plain coefficient vectors.
    std::vector<u64> convolve(const std::vector<u64>& a, const std::vector<u64>& b) {
        std::size_t rlen = a.size() + b.size() - 1;
        int lg = length_lg(rlen);
        auto fa = fwd_transform(a, lg);
        if (&a == &b) return inv_transform(pw_mul(fa, fa), rlen);
        auto fb = fwd_transform(b, lg);
        return inv_transform(pw_mul(fa, fb), rlen);
    }

private:
    u64 half(u64 x) const {  // reduce [0,4p) -> [0,2p)
        return x >= 2 * p_ ? x - 2 * p_ : x;
    }
    u64 shoup_of(u64 w) const { return (u64)(((u128)w << 64) / p_); }
    // w*x mod p in [0, 2p), for w < p and any x.
    u64 shoup_mul(u64 x, u64 w, u64 w_sh) const {
        u64 q = (u64)(((u128)w_sh * x) >> 64);
        return w * x - q * p_;
    }

    void ensure_roots(int lg) {
        std::size_t n = (std::size_t)1 << lg;
        if (rt_.size() >= n) return;
        if (rt_.empty()) {
            rt_ = {1, 1};
            irt_ = {1, 1};
            rtsh_ = {shoup_of(1), shoup_of(1)};
            irtsh_ = rtsh_;
            w_ = element_of_order(p_, (u64)1 << max_lg_);
            built_ = 1;
        }
        rt_.resize(n);
        rtsh_.resize(n);
        irt_.resize(n);
        irtsh_.resize(n);
        // level s fills indices [2^{s-1}, 2^s); z1(s)^2 = z1(s-1) keeps the
        // tables consistent across levels
        for (int s = built_ + 1; ((std::size_t)1 << s) <= n; ++s) {
            std::size_t k = (std::size_t)1 << (s - 1);
            u64 z1 = powmod_u64(w_, (u64)1 << (max_lg_ - s), p_);
            u64 z1i = powmod_u64(z1, p_ - 2, p_);
            for (std::size_t i = k; i < 2 * k; ++i) {
                rt_[i] = (i & 1) ? mulmod_u64(rt_[i / 2], z1, p_) : rt_[i / 2];
                irt_[i] = (i & 1) ? mulmod_u64(irt_[i / 2], z1i, p_) : irt_[i / 2];
                rtsh_[i] = shoup_of(rt_[i]);
                irtsh_[i] = shoup_of(irt_[i]);
            }
            built_ = s;
        }
    }

    // Decimation in frequency: natural order in, bit-reversed order out.
    // Values lazy in [0, 4p).
    void fwd_dif(std::vector<u64>& a) {
        std::size_t n = a.size();
        const u64 twop = 2 * p_;
        for (std::size_t k = n / 2; k >= 1; k /= 2) {
            for (std::size_t i = 0; i < n; i += 2 * k) {
                for (std::size_t j = 0; j < k; ++j) {
                    u64 u = a[i + j];
                    u64 v = a[i + j + k];
                    if (u >= twop) u -= twop;
                    if (v >= twop) v -= twop;
                    a[i + j] = u + v;
                    a[i + j + k] = shoup_mul(u - v + twop, rt_[j + k], rtsh_[j + k]);
                }
            }
        }
    }

    // Decimation in time with inverse roots: exact inverse circuit of
    // fwd_dif up to the overall factor n.
    void inv_dit(std::vector<u64>& a) {
        std::size_t n = a.size();
        const u64 twop = 2 * p_;
        for (std::size_t k = 1; k < n; k *= 2) {
            for (std::size_t i = 0; i < n; i += 2 * k) {
                for (std::size_t j = 0; j < k; ++j) {
                    u64 u = a[i + j];
                    if (u >= twop) u -= twop;
                    u64 t = shoup_mul(a[i + j + k], irt_[j + k], irtsh_[j + k]);
                    a[i + j] = u + t;
                    a[i + j + k] = u - t + twop;
                }
            }
        }
    }

    PrimeField field_;
    Montgomery mont_;
    u64 p_;
    int max_lg_;
    std::vector<u64> rt_, rtsh_, irt_, irtsh_;
    u64 w_ = 0;
    int built_ = 0;
};

}  // namespace entropik
