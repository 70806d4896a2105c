#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "entropik/field.hpp"
#include "entropik/records.hpp"

namespace entropik {

// ---------------------------------------------------------------------------
// Closed half-step recurrences for cyclic symmetric patterns.
// ---------------------------------------------------------------------------

// Exact half-step sequences for prime q >= 5 (p = (q+1)/2):
//   d_n   = (p-1) d_{n-1} - u0_{n-1} - (p-1) u1_{n-1}
//   u0_n  = (p-2) d_{n-2} - (p-1) u1_{n-2}
//   u1_n  = (p-2) d_{n-4} - u0_{n-4} - (p-2) u1_{n-4}
// seeded by the known initial rows.
inline std::pair<DegreeRecord, ExponentRecord> cs_prime_sequence(int q, int n_max) {
    if (q < 5 || !is_prime_u64((u64)q))
        throw std::invalid_argument("cs_prime_sequence: q must be a prime >= 5 (the system only closes there)");
    long long p = (q + 1) / 2;
    std::vector<mpz_class> d{1, p - 1, (p - 1) * (p - 1), p * p * p - 3 * p * p + 2 * p + 1};
    std::vector<mpz_class> u0{0, 0, p - 2, (p - 1) * (p - 2)};
    std::vector<mpz_class> u1{0, 0, 0, 0};
    for (int n = 4; n <= n_max; ++n) {
        d.push_back((p - 1) * d[n - 1] - u0[n - 1] - (p - 1) * u1[n - 1]);
        u0.push_back((p - 2) * d[n - 2] - (p - 1) * u1[n - 2]);
        u1.push_back((p - 2) * d[n - 4] - u0[n - 4] - (p - 2) * u1[n - 4]);
    }
    d.resize(n_max + 1);
    u0.resize(std::min<std::size_t>(u0.size(), n_max + 1));
    u1.resize(std::min<std::size_t>(u1.size(), n_max + 1));
    DegreeRecord rec;
    rec.granularity = Granularity::Half;
    rec.pattern = "cyclic_symmetric";
    rec.q = q;
    rec.method = "recurrence";
    rec.values = d;
    ExponentRecord ex;
    ex.q = q;
    ex.u = {u0, u1};
    // v from the involution balance: v_n^i = (p-2) d_{n-1} + u_{n-1}^i - sum_j u_{n-1}^j
    std::vector<mpz_class> v0, v1;
    for (std::size_t n = 1; n < d.size(); ++n) {
        mpz_class usum = u0[n - 1] + (p - 1) * u1[n - 1];
        v0.push_back((p - 2) * d[n - 1] + u0[n - 1] - usum);
        v1.push_back((p - 2) * d[n - 1] + u1[n - 1] - usum);
    }
    ex.v = {v0, v1};
    return {rec, ex};
}

inline double quadratic_large_root(double b, double c) {
    // larger root of x^2 - b x + c
    return (b + std::sqrt(b * b - 4 * c)) / 2;
}

// lambda for cyclic symmetric patterns with prime q: inverse of the smaller
// root of x^2 + (2 - (p-1)^2) x + 1; degenerates to 1 at p = 3.
inline ComplexityEstimate cs_prime_complexity(int q) {
    if (q < 5 || !is_prime_u64((u64)q)) throw std::invalid_argument("cs_prime_complexity: q must be a prime >= 5");
    long long p = (q + 1) / 2;
    double b = (double)((p - 1) * (p - 1) - 2);
    ComplexityEstimate est;
    est.method = "recurrence";
    est.exact_poly = {1, 2 - (p - 1) * (p - 1), 1};
    if (p == 3) {
        est.lambda = 1.0;
        est.entropy = 0.0;
        est.growth_order = 2;  // quadratic degree growth
        return est;
    }
    est.lambda = quadratic_large_root(b, 1.0);
    est.entropy = std::log(est.lambda);
    return est;
}

// lambda for cyclic patterns: inverse of the smaller root of
// x^2 + (2 - (q-2)^2) x + 1.
inline ComplexityEstimate cyclic_complexity(int q) {
    if (q < 4) throw std::invalid_argument("cyclic_complexity: q must be >= 4");
    long long m = (long long)(q - 2) * (q - 2) - 2;
    ComplexityEstimate est;
    est.method = "recurrence";
    est.exact_poly = {1, 2 - (long long)(q - 2) * (q - 2), 1};
    est.lambda = quadratic_large_root((double)m, 1.0);
    est.entropy = std::log(est.lambda);
    return est;
}

// Conjectured common lambda of the general, symmetric and cyclic patterns:
// the larger root of x^2 - (q^2 - 4q + 2) x + 1.  Coincides with
// cyclic_complexity since (q-2)^2 - 2 = q^2 - 4q + 2.
inline ComplexityEstimate conjecture_lambda(int q) {
    if (q < 4) throw std::invalid_argument("conjecture_lambda: q must be >= 4");
    long long b = (long long)q * q - 4 * q + 2;
    ComplexityEstimate est;
    est.method = "recurrence";
    est.exact_poly = {1, -b, 1};
    est.lambda = quadratic_large_root((double)b, 1.0);
    est.entropy = std::log(est.lambda);
    return est;
}

// ---------------------------------------------------------------------------
// The q = 9 system (four equations; the last one is the conjectural closure).
// ---------------------------------------------------------------------------

struct Q9Sequences {
    std::vector<mpz_class> d, u0, u1, u2;
};

inline Q9Sequences q9_raw(int n_max) {
    Q9Sequences s;
    s.d = {1, 4, 16, 59};
    s.u0 = {0, 0, 3, 12};
    s.u1 = {0, 0, 0, 0};
    s.u2 = {0, 0, 2, 8};
    for (int n = 4; n <= n_max; ++n) {
        s.d.push_back(4 * s.d[n - 1] - s.u0[n - 1] - 3 * s.u1[n - 1] - s.u2[n - 1]);
        s.u0.push_back(3 * s.d[n - 2] - 3 * s.u1[n - 2] - s.u2[n - 2]);
        s.u1.push_back(3 * s.d[n - 4] - s.u0[n - 4] - 2 * s.u1[n - 4] - s.u2[n - 4]);
        s.u2.push_back(2 * s.d[n - 2] - 3 * s.u1[n - 2]);  // conjectural closure
    }
    return s;
}

inline std::pair<DegreeRecord, ExponentRecord> q9_sequence(int n_max) {
    auto s = q9_raw(n_max);
    DegreeRecord rec;
    rec.granularity = Granularity::Half;
    rec.pattern = "cyclic_symmetric";
    rec.q = 9;
    rec.method = "recurrence";
    rec.values.assign(s.d.begin(), s.d.begin() + std::min<std::size_t>(s.d.size(), n_max + 1));
    ExponentRecord ex;
    ex.q = 9;
    ex.u = {s.u0, s.u1, s.u2};
    for (auto& col : ex.u) col.resize(std::min<std::size_t>(col.size(), n_max + 1));
    // v from the balance equations (shifted by one step)
    std::vector<mpz_class> v0, v1, v2;
    for (int n = 1; n <= n_max; ++n) {
        v0.push_back(3 * s.d[n - 1] - 3 * s.u1[n - 1] - s.u2[n - 1]);
        v1.push_back(3 * s.d[n - 1] - s.u0[n - 1] - 2 * s.u1[n - 1] - s.u2[n - 1]);
        v2.push_back(3 * s.d[n - 1] - s.u0[n - 1] - 3 * s.u1[n - 1]);
    }
    ex.v = {v0, v1, v2};
    return {rec, ex};
}

// Closed generating functions of the q=9 half-step sequences over the common
// denominator P(s) = (1-s)(1-3s-2s^2-s^3+2s^4+2s^5-s^6).
struct Q9ClosedForms {
    std::vector<long long> P;                  // denominator
    std::vector<long long> num_d, num_u0, num_u1, num_u2;
    std::vector<long long> f9_num, f9_den;     // full-step generating function
};

inline Q9ClosedForms q9_closed_forms() {
    Q9ClosedForms c;
    // (1-s)(1-3s-2s^2-s^3+2s^4+2s^5-s^6)
    c.P = {1, -4, 1, 1, 3, 0, -3, 1};
    // d(s) = 1 + (4 - s^2 - s^6) s / P  ->  (P + 4s - s^3 - s^7)/P
    c.num_d = {1, 0, 1, 0, 3, 0, -3, 0};
    c.num_u0 = {0, 0, 3, 0, 1, 0, -2};   // (3 + s^2 - 2 s^4) s^2
    c.num_u1 = {0, 0, 0, 0, 3, 0, -2};   // (3 - 2 s^2) s^4
    c.num_u2 = {0, 0, 2, 0, 2, 0, -3};   // (2 + 2 s^2 - 3 s^4) s^2
    c.f9_num = {1, 2, 7, 0, -9, -18, 9};  // (1 + u + 3u^2 - 3u^3)^2
    c.f9_den = {1, -14, 15, -1, 11, 4, -20, 9, -1};  // (1-u)(1-13u+2u^2+u^3+12u^4-8u^5+u^6)
    return c;
}

// Series expansion of num/den (integer coefficients; throws if a
// non-integer coefficient appears).
inline std::vector<mpz_class> series_expand(const std::vector<long long>& num,
                                            const std::vector<long long>& den, int n_terms) {
    if (den.empty() || den[0] == 0) throw std::invalid_argument("series_expand: denominator constant term is zero");
    std::vector<mpz_class> out;
    out.reserve(n_terms);
    mpz_class d0 = den[0];
    for (int k = 0; k < n_terms; ++k) {
        mpz_class c = (k < (int)num.size()) ? mpz_class((long)num[k]) : mpz_class(0);
        for (int j = 1; j <= std::min<int>(k, (int)den.size() - 1); ++j) c -= mpz_class((long)den[j]) * out[k - j];
        mpz_class qq, rr;
        mpz_tdiv_qr(qq.get_mpz_t(), rr.get_mpz_t(), c.get_mpz_t(), d0.get_mpz_t());
        if (rr != 0) throw std::domain_error("series_expand: non-integer coefficient");
        out.push_back(qq);
    }
    return out;
}

// Polynomial growth order of an eventually-polynomial sequence by finite
// differences (smallest k whose (k+1)-st differences vanish on the tail).
inline int polynomial_growth_order(const std::vector<mpz_class>& seq, int max_order = 6) {
    std::vector<mpz_class> cur(seq.begin() + std::min<std::size_t>(2, seq.size()), seq.end());
    for (int k = 0; k <= max_order; ++k) {
        bool all_zero = true;
        for (const auto& x : cur) all_zero &= x == 0;
        if (all_zero) return k - 1;
        if (cur.size() < 2) break;
        std::vector<mpz_class> nxt;
        for (std::size_t i = 1; i < cur.size(); ++i) nxt.push_back(cur[i] - cur[i - 1]);
        cur = std::move(nxt);
    }
    return -1;  // not polynomial within max_order
}

// ---------------------------------------------------------------------------
// Companion-matrix cross-check: the quadratic above divides the
// characteristic polynomial of the 12x12 one-step transition of the
// prime-q system (state = four lags of d, u0, u1).
// ---------------------------------------------------------------------------

inline std::vector<mpz_class> charpoly_int(const std::vector<std::vector<long long>>& M) {
    // Faddeev-LeVerrier over exact rationals; result is integer for integer M.
    std::size_t n = M.size();
    std::vector<std::vector<mpq_class>> A(n, std::vector<mpq_class>(n)), Mq = A;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) Mq[i][j] = (long)M[i][j];
    std::vector<mpq_class> coeffs(n + 1);
    coeffs[n] = 1;  // x^n
    A = Mq;
    mpq_class c;
    for (std::size_t k = 1; k <= n; ++k) {
        mpq_class tr = 0;
        for (std::size_t i = 0; i < n; ++i) tr += A[i][i];
        c = -tr / (long)k;
        coeffs[n - k] = c;
        if (k == n) break;
        for (std::size_t i = 0; i < n; ++i) A[i][i] += c;
        // A <- Mq * A
        std::vector<std::vector<mpq_class>> B(n, std::vector<mpq_class>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t t = 0; t < n; ++t)
                if (Mq[i][t] != 0)
                    for (std::size_t j = 0; j < n; ++j) B[i][j] += Mq[i][t] * A[t][j];
        A = std::move(B);
    }
    std::vector<mpz_class> out(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        if (coeffs[i].get_den() != 1) throw std::logic_error("charpoly_int: non-integer coefficient");
        out[i] = coeffs[i].get_num();
    }
    return out;
}

// True iff x^2 + (2 - (p-1)^2) x + 1 divides the characteristic polynomial
// of the 12x12 transition matrix of the prime-q half-step system.
inline bool verify_companion_factor(int q) {
    long long p = (q + 1) / 2;
    // state vector: (d_{n-1..n-4}, u0_{n-1..n-4}, u1_{n-1..n-4})
    std::vector<std::vector<long long>> T(12, std::vector<long long>(12, 0));
    auto D = [](int lag) { return lag - 1; };
    // d_n
    T[0][D(1)] = p - 1;
    T[0][4 + 0] = -1;        // u0_{n-1}
    T[0][8 + 0] = -(p - 1);  // u1_{n-1}
    // u0_n
    T[4][D(2)] = p - 2;
    T[4][8 + 1] = -(p - 1);
    // u1_n
    T[8][D(4)] = p - 2;
    T[8][4 + 3] = -1;
    T[8][8 + 3] = -(p - 2);
    // shifts
    for (int b : {0, 4, 8})
        for (int l = 1; l < 4; ++l) T[b + l][b + l - 1] = 1;
    auto cp = charpoly_int(T);
    // divide by x^2 + (2-(p-1)^2) x + 1 (coefficients lowest first)
    std::vector<mpz_class> quad{1, 2 - (p - 1) * (p - 1), 1};
    std::vector<mpz_class> rem(cp);
    for (std::size_t i = rem.size(); i-- > 2;) {
        mpz_class c = rem[i];
        if (c == 0) continue;
        rem[i] = 0;
        rem[i - 1] -= c * quad[1];
        rem[i - 2] -= c * quad[0];
    }
    return rem[0] == 0 && rem[1] == 0;
}

}  // namespace entropik
