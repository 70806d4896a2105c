#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <vector>

#include "entropik/field.hpp"
#include "entropik/multipoly.hpp"
#include "entropik/rng.hpp"

namespace entropik {

using FieldMat = std::vector<std::vector<u64>>;
using ZMat = std::vector<std::vector<mpz_class>>;

// det of a field matrix by Gaussian elimination (destroys its copy).
inline u64 field_det(const PrimeField& f, FieldMat m) {
    std::size_t n = m.size();
    u64 det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = f.neg(det);
        }
        det = f.mul(det, m[c][c]);
        u64 inv = f.inv(m[c][c]);
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            u64 t = f.mul(m[r][c], inv);
            for (std::size_t j = c; j < n; ++j) m[r][j] = f.sub(m[r][j], f.mul(t, m[c][j]));
        }
    }
    return det;
}

// Cofactor matrix over a prime field: cof[i][j] = (-1)^{i+j} det(minor_ij).
// Fast path adj = det * inv(M); falls back to per-entry minors when M is
// singular (the adjugate is still well defined).
inline FieldMat field_cofactor_matrix(const PrimeField& f, const FieldMat& M, u64* det_out = nullptr) {
    std::size_t n = M.size();
    if (n == 1) {
        if (det_out) *det_out = M[0][0];
        return {{1}};
    }
    // Gauss-Jordan on [M | I]
    FieldMat a = M;
    FieldMat inv(n, std::vector<u64>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    u64 det = 1;
    bool singular = false;
    for (std::size_t c = 0; c < n && !singular; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) {
            singular = true;
            break;
        }
        if (piv != c) {
            std::swap(a[piv], a[c]);
            std::swap(inv[piv], inv[c]);
            det = f.neg(det);
        }
        det = f.mul(det, a[c][c]);
        u64 ic = f.inv(a[c][c]);
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] = f.mul(a[c][j], ic);
            inv[c][j] = f.mul(inv[c][j], ic);
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            u64 t = a[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] = f.sub(a[r][j], f.mul(t, a[c][j]));
                inv[r][j] = f.sub(inv[r][j], f.mul(t, inv[c][j]));
            }
        }
    }
    if (!singular) {
        if (det_out) *det_out = det;
        FieldMat cof(n, std::vector<u64>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) cof[i][j] = f.mul(det, inv[j][i]);  // adj^T
        return cof;
    }
    if (det_out) *det_out = 0;
    FieldMat cof(n, std::vector<u64>(n));
    FieldMat minor(n - 1, std::vector<u64>(n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (std::size_t c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor[rr][cc++] = M[r][c];
                }
                ++rr;
            }
            u64 d = field_det(f, minor);
            cof[i][j] = ((i + j) & 1) ? f.neg(d) : d;
        }
    }
    return cof;
}

// ---------------------------------------------------------------------------
// Exact integer cofactor matrix.
// ---------------------------------------------------------------------------

inline mpz_class zmat_det_bareiss(ZMat a) {
    std::size_t n = a.size();
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a[piv][k] == 0) ++piv;
            if (piv == n) return 0;
            std::swap(a[piv], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class num = a[k][k] * a[i][j] - a[i][k] * a[k][j];
                mpz_class q, r;
                mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                if (r != 0) throw std::logic_error("bareiss: inexact division");
                a[i][j] = q;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : mpz_class(-a[n - 1][n - 1]);
}

namespace detail {
// Per-entry minors (slow, always correct).
inline ZMat zmat_cofactor_minors(const ZMat& M) {
    std::size_t n = M.size();
    ZMat cof(n, std::vector<mpz_class>(n));
    ZMat minor(n - 1, std::vector<mpz_class>(n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (std::size_t c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor[rr][cc++] = M[r][c];
                }
                ++rr;
            }
            mpz_class d = zmat_det_bareiss(minor);
            cof[i][j] = ((i + j) & 1) ? mpz_class(-d) : d;
        }
    }
    return cof;
}

inline bool zmat_cofactor_verify(const ZMat& M, const ZMat& cof, const mpz_class& det, Rng& rng) {
    // randomized check: M^T . (cof^T v) = det v  <=>  adj(M) M = det I
    std::size_t n = M.size();
    std::vector<mpz_class> v(n), mv(n, 0), amv(n, 0);
    for (auto& x : v) x = (long)(rng.below(1 << 20) + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) mv[i] += M[i][j] * v[j];
    // adj = cof^T ; compute adj . (M v)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) amv[i] += cof[j][i] * mv[j];
    for (std::size_t i = 0; i < n; ++i)
        if (amv[i] != det * v[i]) return false;
    return true;
}
}  // namespace detail

// Exact cofactor matrix of an integer matrix via fraction-free Gauss-Jordan
// on [M | I]; verified by a randomized identity, with a per-entry-minor
// fallback.  Returns the cofactor matrix; det goes to det_out.
inline ZMat zmat_cofactor_matrix(const ZMat& M, mpz_class* det_out = nullptr) {
    std::size_t n = M.size();
    if (n == 1) {
        if (det_out) *det_out = M[0][0];
        return {{mpz_class(1)}};
    }
    Rng rng(0x5eedu + (unsigned)n);
    auto finish = [&](const ZMat& cof, const mpz_class& det) {
        if (det_out) *det_out = det;
        return cof;
    };
    try {
        // Fraction-free Gauss-Jordan: after eliminating column k in every
        // other row, dividing by the previous pivot stays exact; the final
        // left block is det * I and the right block det * M^{-1} = adj.
        ZMat a = M;
        ZMat b(n, std::vector<mpz_class>(n, 0));
        for (std::size_t i = 0; i < n; ++i) b[i][i] = 1;
        mpz_class prev = 1;
        int sign = 1;
        for (std::size_t k = 0; k < n; ++k) {
            if (a[k][k] == 0) {
                std::size_t piv = k + 1;
                while (piv < n && a[piv][k] == 0) ++piv;
                if (piv == n) throw std::logic_error("singular");
                std::swap(a[piv], a[k]);
                std::swap(b[piv], b[k]);
                sign = -sign;
            }
            mpz_class pivval = a[k][k];
            auto update = [&](std::vector<mpz_class>& rowa, std::vector<mpz_class>& rowb,
                              const std::vector<mpz_class>& ka, const std::vector<mpz_class>& kb,
                              const mpz_class& fac) {
                mpz_class q, r;
                for (std::size_t j = 0; j < n; ++j) {
                    mpz_class num = pivval * rowa[j] - fac * ka[j];
                    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                    if (r != 0) throw std::logic_error("inexact");
                    rowa[j] = q;
                    num = pivval * rowb[j] - fac * kb[j];
                    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
                    if (r != 0) throw std::logic_error("inexact");
                    rowb[j] = q;
                }
            };
            for (std::size_t i = 0; i < n; ++i) {
                if (i == k) continue;
                mpz_class fac = a[i][k];
                update(a[i], b[i], a[k], b[k], fac);
            }
            prev = pivval;
        }
        mpz_class det = a[n - 1][n - 1];
        if (sign < 0) det = -det;
        // left block should now be diag(det') with det' = a[n-1][n-1]; the
        // right block is det' * M^{-1}.  adj = det * M^{-1}; cof = adj^T.
        ZMat cof(n, std::vector<mpz_class>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) cof[i][j] = sign > 0 ? b[j][i] : mpz_class(-b[j][i]);
        if (!detail::zmat_cofactor_verify(M, cof, det, rng)) throw std::logic_error("verify failed");
        return finish(cof, det);
    } catch (const std::logic_error&) {
        ZMat cof = detail::zmat_cofactor_minors(M);
        mpz_class det = 0;
        for (std::size_t j = 0; j < n; ++j) det += M[0][j] * cof[0][j];
        if (!detail::zmat_cofactor_verify(M, cof, det, rng))
            throw std::runtime_error("zmat_cofactor_matrix: inconsistent cofactors");
        return finish(cof, det);
    }
}

// ---------------------------------------------------------------------------
// Symbolic cofactor matrix (entries are sparse polynomials).
// ---------------------------------------------------------------------------

// det of the submatrix (rows, cols) by DP over column subsets.
template <class Ring>
MultiPoly<Ring> symbolic_det(const Ring& R, int nvars, const std::vector<std::vector<MultiPoly<Ring>>>& M,
                             const std::vector<int>& rows, const std::vector<int>& cols) {
    using MP = MultiPoly<Ring>;
    std::size_t m = rows.size();
    if (m == 0) return MP::constant(R, nvars, R.one());
    if (m > 20) throw std::invalid_argument("symbolic_det: matrix too large");
    std::vector<MP> dp((std::size_t)1 << m, MP(R, nvars));
    dp[0] = MP::constant(R, nvars, R.one());
    for (std::size_t r = 0; r < m; ++r) {
        std::vector<MP> nxt((std::size_t)1 << m, MP(R, nvars));
        for (std::size_t s = 0; s < dp.size(); ++s) {
            if (dp[s].is_zero() || (std::size_t)__builtin_popcountll((unsigned long long)s) != r) continue;
            int parity = 0;
            for (std::size_t c = 0; c < m; ++c) {
                if (s & ((std::size_t)1 << c)) {
                    ++parity;
                    continue;
                }
                const MP& e = M[rows[r]][cols[c]];
                if (e.is_zero()) continue;
                MP t = mul(dp[s], e);
                std::size_t ns = s | ((std::size_t)1 << c);
                // parity of this placement: number of already-chosen columns
                // greater than c (inversions added by sigma(r) = c)
                int inv = 0;
                for (std::size_t c2 = c + 1; c2 < m; ++c2)
                    if (s & ((std::size_t)1 << c2)) ++inv;
                if (inv & 1) t = -t;
                nxt[ns] = add(nxt[ns], t);
            }
        }
        dp = std::move(nxt);
    }
    return dp[((std::size_t)1 << m) - 1];
}

template <class Ring>
std::vector<std::vector<MultiPoly<Ring>>> symbolic_cofactor_matrix(
    const Ring& R, int nvars, const std::vector<std::vector<MultiPoly<Ring>>>& M) {
    std::size_t n = M.size();
    std::vector<std::vector<MultiPoly<Ring>>> cof(n, std::vector<MultiPoly<Ring>>(n, MultiPoly<Ring>(R, nvars)));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<int> rows;
        for (std::size_t r = 0; r < n; ++r)
            if (r != i) rows.push_back((int)r);
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<int> cols;
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) cols.push_back((int)c);
            auto d = symbolic_det(R, nvars, M, rows, cols);
            cof[i][j] = ((i + j) & 1) ? -d : d;
        }
    }
    return cof;
}

}  // namespace entropik
