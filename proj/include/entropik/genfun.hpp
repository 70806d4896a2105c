#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "entropik/records.hpp"

namespace entropik {

namespace qpoly {

using QP = std::vector<mpq_class>;  // univariate over Q, lowest degree first

inline void trim(QP& a) {
    while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
}
inline long long deg(const QP& a) { return (long long)a.size() - 1; }

inline QP mul(const QP& a, const QP& b) {
    if (a.empty() || b.empty()) return {};
    QP r(a.size() + b.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

inline QP divrem(QP a, const QP& b, QP* rem_out = nullptr) {
    if (b.empty()) throw std::domain_error("qpoly: division by zero");
    QP q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, mpq_class(0));
    while (a.size() >= b.size()) {
        mpq_class c = a.back() / b.back();
        std::size_t off = a.size() - b.size();
        q[off] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[off + i] -= c * b[i];
        a.pop_back();
        while (!a.empty() && sgn(a.back()) == 0) a.pop_back();
    }
    if (rem_out) *rem_out = a;
    return q;
}

inline QP gcd(QP a, QP b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        QP r;
        divrem(a, b, &r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        mpq_class lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

inline mpq_class eval(const QP& a, const mpq_class& x) {
    mpq_class r = 0;
    for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

// scale to coprime integer coefficients, constant term (or lowest nonzero)
// positive
inline std::vector<mpz_class> to_primitive_int(const QP& a) {
    if (a.empty()) return {};
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& c : a) {
        mpz_class d = c.get_den(), n = c.get_num();
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    }
    std::vector<mpz_class> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        mpq_class v = a[i] * mpq_class(den_lcm, num_gcd);
        v.canonicalize();
        out[i] = v.get_num();
    }
    for (const auto& c : out)
        if (c != 0) {
            if (c < 0)
                for (auto& x : out) x = -x;
            break;
        }
    return out;
}

}  // namespace qpoly

// Rational generating function with integer coefficients, gcd(num, den) = 1,
// denominator constant term +1.
struct RationalGF {
    std::vector<mpz_class> num, den;

    bool normalized() const { return !den.empty() && den[0] == 1; }

    std::vector<mpz_class> expand(int n_terms) const {
        std::vector<mpz_class> out;
        out.reserve(n_terms);
        for (int k = 0; k < n_terms; ++k) {
            mpz_class c = (k < (int)num.size()) ? num[k] : mpz_class(0);
            for (int j = 1; j <= std::min<int>(k, (int)den.size() - 1); ++j) c -= den[j] * out[k - j];
            mpz_class q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), c.get_mpz_t(), den[0].get_mpz_t());
            if (r != 0) throw std::domain_error("RationalGF::expand: non-integer coefficient");
            out.push_back(q);
        }
        return out;
    }

    bool operator==(const RationalGF& o) const { return num == o.num && den == o.den; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        nlohmann::ordered_json n = nlohmann::ordered_json::array(), d = nlohmann::ordered_json::array();
        for (const auto& c : num) n.push_back(c.get_str());
        for (const auto& c : den) d.push_back(c.get_str());
        j["numerator"] = n;
        j["denominator"] = d;
        return j;
    }
};

struct PadeSplit {
    int N = 0, M = 0;
    bool singular = false;
    RationalGF reduced;  // valid when !singular
};

struct PadeTable {
    std::vector<PadeSplit> splits;
    int n_terms = 0;
};

namespace detail {

// Reduce num/den over Q and normalize to integer coprime with den(0) = 1.
inline std::optional<RationalGF> reduce_gf(const qpoly::QP& num, const qpoly::QP& den) {
    qpoly::QP n = num, d = den;
    qpoly::trim(n);
    qpoly::trim(d);
    if (d.empty()) return std::nullopt;
    qpoly::QP g = qpoly::gcd(n, d);
    if (qpoly::deg(g) > 0) {
        n = qpoly::divrem(n, g);
        d = qpoly::divrem(d, g);
    }
    RationalGF gf;
    gf.num = qpoly::to_primitive_int(n);
    gf.den = qpoly::to_primitive_int(d);
    if (gf.den.empty() || gf.den[0] == 0) return std::nullopt;
    if (gf.den[0] < 0) {
        for (auto& c : gf.den) c = -c;
        for (auto& c : gf.num) c = -c;
    }
    if (gf.den[0] != 1) return std::nullopt;  // not a power series around 0 with our conventions
    return gf;
}

}  // namespace detail

// Exact [N, M] Pade approximants for every split N + M = n_terms - 1.
inline PadeTable pade_fit(const std::vector<mpz_class>& coeffs) {
    int L = (int)coeffs.size();
    if (L < 4) throw std::invalid_argument("pade_fit: need at least 4 series terms");
    PadeTable table;
    table.n_terms = L;
    std::vector<mpq_class> c(coeffs.begin(), coeffs.end());
    for (int N = 0; N <= L - 1; ++N) {
        int M = L - 1 - N;
        PadeSplit sp;
        sp.N = N;
        sp.M = M;
        // Solve sum_{j=0..M} b_j c_{k-j} = 0 for k = N+1 .. N+M, b_0 = 1.
        int m = M;
        std::vector<std::vector<mpq_class>> A(m, std::vector<mpq_class>(m + 1, mpq_class(0)));
        for (int row = 0; row < m; ++row) {
            int k = N + 1 + row;
            for (int j = 1; j <= M; ++j) A[row][j - 1] = (k - j >= 0) ? c[k - j] : mpq_class(0);
            A[row][m] = -((k >= 0) ? c[k] : mpq_class(0));  // b_0 * c_k moved right
        }
        // Gauss-Jordan over Q; underdetermined systems are fine (any
        // solution reduces to the same fraction), only inconsistent ones
        // are marked singular.
        std::vector<int> pivot_col;
        int rank = 0;
        for (int col = 0; col < m && rank < m; ++col) {
            int piv = -1;
            for (int r = rank; r < m; ++r)
                if (sgn(A[r][col]) != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) continue;
            std::swap(A[piv], A[rank]);
            mpq_class inv = 1 / A[rank][col];
            for (int j = col; j <= m; ++j) A[rank][j] *= inv;
            for (int r = 0; r < m; ++r) {
                if (r == rank || sgn(A[r][col]) == 0) continue;
                mpq_class f = A[r][col];
                for (int j = col; j <= m; ++j) A[r][j] -= f * A[rank][j];
            }
            pivot_col.push_back(col);
            ++rank;
        }
        bool inconsistent = false;
        for (int r = rank; r < m; ++r)
            if (sgn(A[r][m]) != 0) inconsistent = true;
        if (inconsistent) {
            sp.singular = true;
            table.splits.push_back(sp);
            continue;
        }
        std::vector<mpq_class> bsol(m, mpq_class(0));  // free variables set to 0
        for (int r = 0; r < rank; ++r) bsol[pivot_col[r]] = A[r][m];
        qpoly::QP den(M + 1, mpq_class(0));
        den[0] = 1;
        for (int j = 1; j <= M; ++j) den[j] = bsol[j - 1];
        qpoly::QP num(N + 1, mpq_class(0));
        for (int k = 0; k <= N; ++k) {
            mpq_class s = 0;
            for (int j = 0; j <= std::min(k, M); ++j) s += den[j] * c[k - j];
            num[k] = s;
        }
        auto gf = detail::reduce_gf(num, den);
        if (!gf) {
            sp.singular = true;
        } else {
            sp.reduced = *gf;
        }
        table.splits.push_back(sp);
    }
    return table;
}

struct StabilizeResult {
    bool stable = false;
    RationalGF gf;
    std::vector<int> splits_used;  // N values of the agreeing run
    std::string diagnostics;
};

// A fraction is accepted when at least three consecutive splits reduce to
// the same fraction, the fraction reproduces every input term, and its
// expansion stays a nonnegative integer sequence.
inline StabilizeResult stabilize(const PadeTable& table, const std::vector<mpz_class>& coeffs,
                                 int positivity_horizon = 200) {
    StabilizeResult res;
    int best_len = 0;
    int L = (int)coeffs.size();
    std::size_t i = 0;
    while (i < table.splits.size()) {
        if (table.splits[i].singular) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < table.splits.size() && !table.splits[j].singular &&
               table.splits[j].reduced == table.splits[i].reduced)
            ++j;
        int len = (int)(j - i);
        if (len >= 3 && len > best_len) {
            const RationalGF& cand = table.splits[i].reduced;
            bool ok = true;
            try {
                auto series = cand.expand(std::max(L, positivity_horizon));
                for (int k = 0; k < L && ok; ++k) ok = series[k] == coeffs[k];
                for (const auto& x : series) ok &= x >= 0;
            } catch (const std::domain_error&) {
                ok = false;
            }
            if (ok) {
                best_len = len;
                res.stable = true;
                res.gf = cand;
                res.splits_used.clear();
                for (std::size_t t = i; t < j; ++t) res.splits_used.push_back(table.splits[t].N);
            }
        }
        i = j;
    }
    if (!res.stable) res.diagnostics = "no run of >= 3 consecutive splits reproduces the data";
    return res;
}

// ---------------------------------------------------------------------------
// Complexity from the generating function.
// ---------------------------------------------------------------------------

namespace detail {

inline int multiplicity_at_one(std::vector<mpz_class> den) {
    // multiplicity of the root u = 1
    int m = 0;
    while (!den.empty()) {
        mpz_class v = 0;
        for (const auto& c : den) v += c;
        if (v != 0) break;
        // divide by (1 - u): den = (1-u) * q with q_k = sum_{j<=k} den_j
        std::vector<mpz_class> q(den.size() - 1);
        mpz_class acc = 0;
        for (std::size_t k = 0; k + 1 < den.size(); ++k) {
            acc += den[k];
            q[k] = acc;
        }
        den = std::move(q);
        ++m;
    }
    return m;
}

inline double eval_double(const std::vector<mpz_class>& p, double x) {
    double r = 0;
    for (std::size_t i = p.size(); i-- > 0;) r = r * x + p[i].get_d();
    return r;
}

// smallest real root in (lo, hi), refined by bisection; nullopt if no sign
// change is found on a fine grid
inline std::optional<double> smallest_real_root(const std::vector<mpz_class>& p, double lo, double hi) {
    const int grid = 1 << 14;
    double prev_x = lo, prev_v = eval_double(p, lo);
    for (int i = 1; i <= grid; ++i) {
        double x = lo + (hi - lo) * i / grid;
        double v = eval_double(p, x);
        if (v == 0.0 || (prev_v < 0) != (v < 0)) {
            double a = prev_x, b = x;
            for (int it = 0; it < 200; ++it) {
                double mid = (a + b) / 2;
                double vm = eval_double(p, mid);
                if ((vm < 0) == (prev_v < 0))
                    a = mid;
                else
                    b = mid;
            }
            return (a + b) / 2;
        }
        prev_x = x;
        prev_v = v;
    }
    return std::nullopt;
}

}  // namespace detail

// lambda = 1 / (modulus of the smallest zero of the denominator), computed
// two ways (real-root isolation and coefficient growth) and reconciled.
inline ComplexityEstimate lambda_from_gf(const RationalGF& gf, double tol = 1e-9) {
    if ((long long)gf.den.size() - 1 < 1) throw std::invalid_argument("lambda_from_gf: constant denominator");
    ComplexityEstimate est;
    est.method = "genfun";
    if (gf.den.size() <= 64) {
        est.exact_poly.clear();
        bool fits = true;
        for (const auto& c : gf.den) fits &= c.fits_slong_p();
        if (fits)
            for (const auto& c : gf.den) est.exact_poly.push_back(c.get_si());
    }

    auto root = detail::smallest_real_root(gf.den, 1e-12, 1.0 - 1e-9);
    if (!root) {
        // no pole inside the unit disc on the positive axis: polynomial growth
        int m = detail::multiplicity_at_one(gf.den);
        if (m == 0) throw std::domain_error("lambda_from_gf: no real pole in (0,1) and u=1 is not a pole");
        est.lambda = 1.0;
        est.entropy = 0.0;
        est.growth_order = m - 1;
        est.uncertainty = 0.0;
        return est;
    }
    double lambda_a = 1.0 / *root;

    // growth-rate route on the series itself
    int horizon = 500;
    auto series = gf.expand(horizon + 1);
    double lambda_b = lambda_a;
    if (series[horizon] > 0 && series[horizon - 1] > 0) {
        mpq_class ratio(series[horizon], series[horizon - 1]);
        lambda_b = ratio.get_d();
    }
    if (std::abs(lambda_a - lambda_b) > tol * std::max(1.0, lambda_a))
        throw std::domain_error("lambda_from_gf: root isolation and growth estimates disagree");
    est.lambda = lambda_a;
    est.entropy = std::log(lambda_a);
    est.uncertainty = std::abs(lambda_a - lambda_b);
    return est;
}

}  // namespace entropik
