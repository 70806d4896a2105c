#pragma once

#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entropik/cmatrix.hpp"
#include "entropik/maps.hpp"
#include "entropik/pattern.hpp"
#include "entropik/records.hpp"
#include "entropik/rng.hpp"
#include "entropik/unipoly.hpp"

namespace entropik {

struct GenericLine {
    std::vector<u64> a, b;  // running point a + b t
};

inline GenericLine random_line(const PrimeField& f, int p, Rng& rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        GenericLine l;
        l.a.resize(p);
        l.b.resize(p);
        for (auto& v : l.a) v = 1 + rng.below(f.modulus() - 1);
        for (auto& v : l.b) v = 1 + rng.below(f.modulus() - 1);
        bool nondeg = false;
        for (int i = 0; i < p && !nondeg; ++i)
            for (int j = i + 1; j < p && !nondeg; ++j)
                nondeg = f.mul(l.a[i], l.b[j]) != f.mul(l.a[j], l.b[i]);
        if (nondeg) return l;
    }
    throw std::runtime_error("random_line: could not draw a nondegenerate line");
}

struct LineOptions {
    int trials = 3;
    u64 seed = 1;
    bool verify_content = true;      // extra pairwise gcd after each reduction
    long long verify_max_degree = 2'000'000;  // skip the check above this size
};

namespace detail {

// Reduced Hadamard step: out_k = lcm(X)/X_k removes exactly the common
// content of prod_{j != k} X_j.
inline std::vector<UniPoly> hadamard_step_reduced(const std::vector<UniPoly>& X) {
    std::size_t p = X.size();
    for (const auto& x : X)
        if (x.is_zero()) throw std::runtime_error("line iteration degenerated to zero component");
    // balanced lcm tree
    std::vector<UniPoly> layer = X;
    while (layer.size() > 1) {
        std::vector<UniPoly> nxt;
        for (std::size_t i = 0; i + 1 < layer.size(); i += 2) nxt.push_back(lcm(layer[i], layer[i + 1]));
        if (layer.size() & 1) nxt.push_back(layer.back());
        layer = std::move(nxt);
    }
    UniPoly L = std::move(layer.front());
    std::vector<UniPoly> out;
    out.reserve(p);
    for (const auto& x : X) out.push_back(exact_div(L, x));
    return out;
}

inline void verify_family_content_free(const std::vector<UniPoly>& X, Rng& rng, int step) {
    // content divides every pairwise gcd; one random pairing suffices
    const auto& f = X.front().field();
    UniPoly acc = X.back();
    if (X.size() > 2) acc = add(acc, scale(X[1], 1 + rng.below(f.modulus() - 1)));
    UniPoly g = gcd(X.front(), acc);
    if (g.degree() != 0)
        throw std::logic_error("line iteration: residual content detected after reduction at step " +
                               std::to_string(step));
}

struct TrialResult {
    std::vector<mpz_class> degrees;  // half-step, index 0..n
    bool degenerate = false;
    int degenerate_at = -1;
};

inline TrialResult run_trial_cs(const Pattern& pat, int n_half, const PrimeField& fld, Rng rng,
                                const LineOptions& opt) {
    TrialResult res;
    CMatrix C(pat, fld);
    int p = pat.num_classes();
    GenericLine line = random_line(fld, p, rng);
    std::vector<UniPoly> X;
    X.reserve(p);
    for (int k = 0; k < p; ++k) X.push_back(UniPoly(fld, {line.a[k], line.b[k]}));
    res.degrees.push_back(1);
    auto cchange = [&](const std::vector<UniPoly>& Z) {
        std::vector<UniPoly> Y;
        Y.reserve(p);
        for (int r = 0; r < p; ++r) {
            UniPoly acc(fld);
            for (int s = 0; s < p; ++s) acc = add(acc, scale(Z[s], C.at(r, s)));
            Y.push_back(std::move(acc));
        }
        return Y;
    };
    for (int n = 1; n <= n_half; ++n) {
        try {
            if (n & 1) {
                // I = C . J . C; the linear changes cannot introduce content
                X = cchange(hadamard_step_reduced(cchange(X)));
            } else {
                X = hadamard_step_reduced(X);
            }
        } catch (const std::runtime_error&) {
            res.degenerate = true;
            res.degenerate_at = n;
            return res;
        }
        long long d = 0;
        for (const auto& x : X) d = std::max(d, x.degree());
        if (opt.verify_content && d <= opt.verify_max_degree) verify_family_content_free(X, rng, n);
        res.degrees.push_back((long)d);
    }
    return res;
}

// General patterns: J by the lcm route, I by evaluating the symbolic
// cofactor components on the univariate tuple (with cached powers), then
// removing the full univariate content.
inline TrialResult run_trial_general(const Pattern& pat, int n_half, const PrimeField& fld, Rng rng,
                                     const LineOptions& opt, const std::vector<RatPoly>& icomps_q) {
    TrialResult res;
    int p = pat.num_classes();
    std::vector<FpPoly> icomps;
    icomps.reserve(p);
    for (const auto& c : icomps_q) icomps.push_back(to_field_poly(c, fld));
    GenericLine line = random_line(fld, p, rng);
    std::vector<UniPoly> X;
    X.reserve(p);
    for (int k = 0; k < p; ++k) X.push_back(UniPoly(fld, {line.a[k], line.b[k]}));
    res.degrees.push_back(1);
    unsigned max_exp = 0;
    for (const auto& c : icomps)
        for (const auto& t : c.terms())
            for (int i = 0; i < p; ++i) max_exp = std::max(max_exp, c.exp_of(t.first, i));
    for (int n = 1; n <= n_half; ++n) {
        try {
            if (n & 1) {
                // power cache: X_i^e for e <= max_exp
                std::vector<std::vector<UniPoly>> pw(p);
                for (int i = 0; i < p; ++i) {
                    pw[i].push_back(UniPoly::constant(fld, 1));
                    for (unsigned e = 1; e <= max_exp; ++e) pw[i].push_back(mul(pw[i].back(), X[i]));
                }
                std::vector<UniPoly> Y;
                Y.reserve(p);
                for (int k = 0; k < p; ++k) {
                    UniPoly acc(fld);
                    for (const auto& t : icomps[k].terms()) {
                        UniPoly term = UniPoly::constant(fld, t.second);
                        for (int i = 0; i < p; ++i) {
                            unsigned e = icomps[k].exp_of(t.first, i);
                            if (e) term = mul(term, pw[i][e]);
                        }
                        acc = add(acc, term);
                    }
                    Y.push_back(std::move(acc));
                }
                UniPoly g = content_of(Y);
                if (g.degree() > 0)
                    for (auto& y : Y) y = exact_div(y, g);
                X = std::move(Y);
                for (const auto& x : X)
                    if (x.is_zero()) throw std::runtime_error("zero component");
            } else {
                X = hadamard_step_reduced(X);
            }
        } catch (const std::runtime_error&) {
            res.degenerate = true;
            res.degenerate_at = n;
            return res;
        }
        long long d = 0;
        for (const auto& x : X) d = std::max(d, x.degree());
        if (opt.verify_content && d <= opt.verify_max_degree) verify_family_content_free(X, rng, n);
        res.degrees.push_back((long)d);
    }
    return res;
}

}  // namespace detail

// Degrees of the iterates of K = I . J restricted to a generic line, at
// half-step granularity (one entry per elementary involution, starting with
// I).  Per-step maximum over independent trials; disagreements are flagged.
inline DegreeRecord line_degrees(const Pattern& pat, int n_max_full, const LineOptions& opt = {}) {
    if (n_max_full < 1) throw std::invalid_argument("line_degrees: n_max must be >= 1");
    if (opt.trials < 1) throw std::invalid_argument("line_degrees: trials must be >= 1");
    int n_half = 2 * n_max_full;
    bool cs = pat.kind() == PatternKind::CyclicSymmetric;
    std::vector<RatPoly> icomps;
    if (!cs) icomps = inverse_map(pat).components;

    Rng seeder(opt.seed);
    std::vector<std::future<detail::TrialResult>> futs;
    for (int t = 0; t < opt.trials; ++t) {
        PrimeField fld = find_field_with_root((u64)pat.q(), 60, 26, t);
        Rng trial_rng = seeder.split((u64)t);
        futs.push_back(std::async(std::launch::async, [=, &pat, &icomps]() {
            return cs ? detail::run_trial_cs(pat, n_half, fld, trial_rng, opt)
                      : detail::run_trial_general(pat, n_half, fld, trial_rng, opt, icomps);
        }));
    }
    std::vector<detail::TrialResult> results;
    for (auto& f : futs) results.push_back(f.get());

    DegreeRecord rec;
    rec.granularity = Granularity::Half;
    rec.pattern = kind_name(pat.kind());
    rec.q = pat.q();
    rec.method = "line";
    for (int n = 0; n <= n_half; ++n) {
        mpz_class best = -1;
        bool any = false, differ = false;
        for (const auto& r : results) {
            if ((int)r.degrees.size() <= n) continue;
            if (any && r.degrees[n] != best) differ = true;
            if (!any || r.degrees[n] > best) best = r.degrees[n];
            any = true;
        }
        if (!any) {
            if (n == 0) continue;
            throw std::runtime_error("line_degrees: all trials degenerate at half-step " + std::to_string(n));
        }
        rec.values.push_back(best);
        if (differ) rec.flags.push_back(n);
    }
    return rec;
}

// Pointwise maximum of independent records (accidental cancellations only
// lower degrees); disagreements are flagged.
inline DegreeRecord degree_consensus(const std::vector<DegreeRecord>& records) {
    if (records.empty()) throw std::invalid_argument("degree_consensus: empty record list");
    const auto& first = records.front();
    for (const auto& r : records) {
        if (r.granularity != first.granularity) throw std::invalid_argument("degree_consensus: mixed granularity");
        if (r.q != first.q || r.pattern != first.pattern)
            throw std::invalid_argument("degree_consensus: mixed pattern or size");
    }
    DegreeRecord out = first;
    out.flags.clear();
    std::size_t len = 0;
    for (const auto& r : records) len = std::max(len, r.values.size());
    out.values.assign(len, 0);
    for (std::size_t n = 0; n < len; ++n) {
        bool any = false, differ = false;
        mpz_class best = -1;
        for (const auto& r : records) {
            if (n >= r.values.size()) continue;
            if (any && r.values[n] != best) differ = true;
            if (!any || r.values[n] > best) best = r.values[n];
            any = true;
        }
        out.values[n] = best;
        if (differ) out.flags.push_back((int)n);
    }
    return out;
}

}  // namespace entropik
