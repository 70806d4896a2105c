#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "entropik/adjugate.hpp"
#include "entropik/cmatrix.hpp"
#include "entropik/multipoly.hpp"
#include "entropik/pattern.hpp"
#include "entropik/unipoly.hpp"

namespace entropik {

// Reduce a rational-coefficient polynomial mod p.
inline FpPoly to_field_poly(const RatPoly& f, const PrimeField& fld) {
    FpRing R(fld);
    FpPoly g(R, f.nvars());
    std::vector<FpPoly::Term> raw;
    raw.reserve(f.term_count());
    for (const auto& t : f.terms()) {
        mpz_class num = t.second.get_num() % mpz_class(fld.modulus());
        mpz_class den = t.second.get_den() % mpz_class(fld.modulus());
        u64 n = fld.reduce_int(num.get_si());
        u64 d = fld.reduce_int(den.get_si());
        raw.push_back({t.first, fld.mul(n, fld.inv(d))});
    }
    g.assign_normalized(std::move(raw));
    return g;
}

namespace detail {

// f evaluated at coordinates that are univariate polynomials (in a formal
// parameter), naive per-term expansion; fine for small f.
inline UniPoly eval_at_unipolys(const FpPoly& f, const std::vector<UniPoly>& args, const PrimeField& fld) {
    UniPoly acc(fld);
    for (const auto& t : f.terms()) {
        UniPoly term = UniPoly::constant(fld, t.second);
        for (int i = 0; i < f.nvars(); ++i) {
            unsigned e = f.exp_of(t.first, i);
            for (unsigned k = 0; k < e; ++k) term = mul(term, args[i]);
        }
        acc = add(acc, term);
    }
    return acc;
}

// Degree of the common polynomial factor of a family, measured on a random
// line over a prime field (an upper bound that is exact w.h.p.).
inline long long line_content_degree(const std::vector<RatPoly>& fs, const PrimeField& fld, Rng& rng) {
    int nv = fs.front().nvars();
    std::vector<UniPoly> args;
    args.reserve(nv);
    for (int i = 0; i < nv; ++i)
        args.push_back(UniPoly(fld, {1 + rng.below(fld.modulus() - 1), 1 + rng.below(fld.modulus() - 1)}));
    std::vector<UniPoly> restr;
    restr.reserve(fs.size());
    for (const auto& f : fs) restr.push_back(eval_at_unipolys(to_field_poly(f, fld), args, fld));
    return content_of(restr).degree();
}

// Rational reconstruction of c mod m with |num|, den <= sqrt(m/2).
inline bool rational_reconstruct(const mpz_class& c, const mpz_class& m, mpq_class& out) {
    mpz_class bound;
    mpz_sqrt(bound.get_mpz_t(), mpz_class(m / 2).get_mpz_t());
    mpz_class r0 = m, r1 = ((c % m) + m) % m, t0 = 0, t1 = 1;
    while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0) return false;
    mpz_class den = abs(t1);
    mpz_class num = t1 < 0 ? mpz_class(-r1) : r1;
    if (den > bound) return false;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1 && !(num == 0 && den == 1)) return false;
    out = mpq_class(num, den);
    out.canonicalize();
    return true;
}

}  // namespace detail

// Common polynomial factor of a component family over Q.  The common
// monomial is split off first; the polynomial part is computed from modular
// images (gcd over F_p, CRT, rational reconstruction) and verified by exact
// division, with a direct PRS over Q as a last resort.
inline RatPoly rat_gcd_of(const std::vector<RatPoly>& fs) {
    if (fs.empty()) throw std::invalid_argument("rat_gcd_of: empty family");
    RatRing R;
    int nv = fs.front().nvars();
    // common monomial
    std::vector<unsigned> mono(nv, ~0u);
    for (const auto& f : fs) {
        if (f.is_zero()) continue;
        auto cm = f.content_monomial();
        for (int i = 0; i < nv; ++i) mono[i] = std::min(mono[i], cm[i]);
    }
    std::vector<RatPoly> red;
    red.reserve(fs.size());
    for (const auto& f : fs) red.push_back(f.divide_by_monomial(mono));
    RatPoly mono_part = RatPoly::from_exponents(R, nv, mono, mpq_class(1));

    Rng rng(0xC0FFEE);
    PrimeField probe = find_field_with_root(2, 59, 1, 0);
    long long cdeg = detail::line_content_degree(red, probe, rng);
    if (cdeg <= 0) return mono_part;

    // modular gcd images: one nullspace pair-gcd of two random combinations
    // per prime, verified against every component
    std::vector<FpPoly> images;
    std::vector<PrimeField> fields;
    for (int idx = 0; idx < 6; ++idx) {
        PrimeField fld = find_field_with_root(2, 59, 1, idx + 1);
        FpRing FR(fld);
        std::vector<FpPoly> redp;
        redp.reserve(red.size());
        for (const auto& f : red) redp.push_back(to_field_poly(f, fld));
        FpPoly F(FR, nv), G(FR, nv);
        for (const auto& fp : redp) {
            F = add(F, scale(fp, 1 + rng.below(fld.modulus() - 1)));
            G = add(G, scale(fp, 1 + rng.below(fld.modulus() - 1)));
        }
        FpPoly g = fp_homog_pair_gcd(F, G, cdeg);
        if (g.is_zero() || g.degree() != cdeg) continue;  // unlucky prime or wrong degree
        bool divides_all = true;
        for (const auto& fp : redp) {
            try {
                exact_divide(fp, g);
            } catch (const std::domain_error&) {
                divides_all = false;
                break;
            }
        }
        if (!divides_all) continue;
        images.push_back(mp_unit_normalize(g));
        fields.push_back(fld);
        if (images.size() < 2) continue;

        // keys must agree across the images
        const auto& g0 = images[0];
        bool consistent = images.back().term_count() == g0.term_count();
        if (consistent)
            for (std::size_t t = 0; t < g0.term_count(); ++t)
                consistent &= images.back().terms()[t].first == g0.terms()[t].first;
        if (!consistent) continue;

        mpz_class m = mpz_class(fields[0].modulus()) * mpz_class(fields.back().modulus());
        std::vector<RatPoly::Term> raw;
        bool ok = true;
        for (std::size_t t = 0; t < g0.term_count() && ok; ++t) {
            mpz_class c0((unsigned long)g0.terms()[t].second), c1((unsigned long)images.back().terms()[t].second);
            mpz_class p0(fields[0].modulus()), p1(fields.back().modulus());
            mpz_class inv;
            if (mpz_invert(inv.get_mpz_t(), p0.get_mpz_t(), p1.get_mpz_t()) == 0) {
                ok = false;
                break;
            }
            mpz_class x = c0 + p0 * (((c1 - c0) * inv) % p1);
            x = ((x % m) + m) % m;
            mpq_class val;
            if (!detail::rational_reconstruct(x, m, val)) {
                ok = false;
                break;
            }
            raw.push_back({g0.terms()[t].first, val});
        }
        if (!ok) continue;
        RatPoly cand(R, nv);
        cand.assign_normalized(std::move(raw));
        cand = mp_unit_normalize(cand);
        // verify by exact division
        try {
            std::vector<RatPoly> quot;
            for (const auto& f : red) quot.push_back(exact_divide(f, cand));
            Rng rng2(0xBEEF);
            if (detail::line_content_degree(quot, probe, rng2) == 0) return mul(mono_part, cand);
        } catch (const std::domain_error&) {
        }
    }
    // exact fallback
    RatPoly g(R, nv);
    for (const auto& f : red) {
        g = g.is_zero() ? f : mp_gcd(g, f);
        if (!g.is_zero() && g.degree() == 0) break;
    }
    return mul(mono_part, mp_unit_normalize(g));
}

// ---------------------------------------------------------------------------
// Polynomial maps on the reduced projective space of a pattern.
// ---------------------------------------------------------------------------

// Thrown when a polynomial map is evaluated at a singular point.
class IndeterminateImage : public std::domain_error {
public:
    explicit IndeterminateImage(std::string point)
        : std::domain_error("indeterminate image at " + point), point_(std::move(point)) {}
    const std::string& point() const { return point_; }

private:
    std::string point_;
};

struct PolyMap {
    Pattern pattern;
    std::vector<RatPoly> components;  // homogeneous, equal degree, content-free
    std::string name;

    long long degree() const { return components.empty() ? -1 : components.front().degree(); }
};

inline PolyMap hadamard_map(const Pattern& pat) {
    int p = pat.num_classes();
    RatRing R;
    std::vector<RatPoly> comps;
    comps.reserve(p);
    for (int k = 0; k < p; ++k) {
        std::vector<unsigned> e(p, 1);
        e[k] = 0;
        comps.push_back(RatPoly::from_exponents(R, p, e, mpq_class(1)));
    }
    return PolyMap{pat, std::move(comps), "J"};
}

// kappa_J: J(J(x)) = kappa * x with kappa = prod_i x_i^{p-2}.
inline RatPoly kappa_hadamard(const Pattern& pat) {
    int p = pat.num_classes();
    std::vector<unsigned> e(p, (unsigned)(p - 2));
    return RatPoly::from_exponents(RatRing{}, p, e, mpq_class(1));
}

// Matrix inverse up to a factor, in the pattern's class coordinates: build
// the symbolic cofactor matrix, check it respects the pattern, read one
// representative per class, and divide out the polynomial content.
inline PolyMap inverse_map(const Pattern& pat) {
    int q = pat.q(), p = pat.num_classes();
    RatRing R;
    std::vector<std::vector<RatPoly>> M(q, std::vector<RatPoly>(q, RatPoly(R, p)));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) M[i][j] = RatPoly::variable(R, p, pat.class_of(i, j));
    auto cof = symbolic_cofactor_matrix(R, p, M);
    std::vector<RatPoly> comps(p, RatPoly(R, p));
    std::vector<char> seen(p, 0);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) {
            int c = pat.class_of(i, j);
            if (!seen[c]) {
                seen[c] = 1;
                comps[c] = cof[i][j];
            } else if (!(comps[c] == cof[i][j])) {
                throw std::domain_error("inverse_map: pattern not admissible (cofactor entries differ in class " +
                                        std::to_string(c) + ")");
            }
        }
    RatPoly g = rat_gcd_of(comps);
    if (g.degree() > 0)
        for (auto& c : comps) c = exact_divide(c, g);
    for (auto& c : comps) {
        if (!c.is_homogeneous()) throw std::logic_error("inverse_map: component not homogeneous");
    }
    return PolyMap{pat, std::move(comps), "I"};
}

// ---------------------------------------------------------------------------
// Evaluation.
// ---------------------------------------------------------------------------

using ZPoint = std::vector<mpz_class>;

inline std::string point_str(const ZPoint& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
    return s + "]";
}
inline std::string point_str(const std::vector<u64>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "]";
}

// Normalize an integer projective point: divide by the gcd and make the
// first nonzero coordinate positive.
inline ZPoint z_normalize(ZPoint v) {
    mpz_class g = 0;
    for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 0) return v;
    for (auto& x : v) x /= g;
    for (const auto& x : v)
        if (x != 0) {
            if (x < 0)
                for (auto& y : v) y = -y;
            break;
        }
    return v;
}

inline bool z_proj_equal(const ZPoint& a, const ZPoint& b) {
    return z_normalize(a) == z_normalize(b);
}

inline ZPoint evaluate(const PolyMap& map, const ZPoint& x) {
    int p = map.pattern.num_classes();
    if ((int)x.size() != p) throw std::invalid_argument("evaluate: point arity");
    std::vector<mpq_class> xq(x.begin(), x.end());
    ZPoint out(p);
    bool all_zero = true;
    for (int k = 0; k < p; ++k) {
        mpq_class v = map.components[k].eval(xq);
        if (v.get_den() != 1) throw std::logic_error("evaluate: non-integer image of integer point");
        out[k] = v.get_num();
        if (out[k] != 0) all_zero = false;
    }
    if (all_zero) throw IndeterminateImage(point_str(x));
    return z_normalize(out);
}

inline std::vector<u64> evaluate_mod(const PolyMap& map, const std::vector<u64>& x, const PrimeField& fld) {
    int p = map.pattern.num_classes();
    if ((int)x.size() != p) throw std::invalid_argument("evaluate_mod: point arity");
    std::vector<u64> out(p, 0);
    bool all_zero = true;
    for (int k = 0; k < p; ++k) {
        FpPoly g = to_field_poly(map.components[k], fld);
        std::vector<u64> xs(x);
        out[k] = g.eval(xs);
        if (out[k] != 0) all_zero = false;
    }
    if (all_zero) throw IndeterminateImage(point_str(x));
    return out;
}

// ---------------------------------------------------------------------------
// Orbit report: the action of alternating J, I on the singular varieties.
// ---------------------------------------------------------------------------

struct OrbitStep {
    std::string map;   // "J" or "I"
    std::string from;  // label of the source variety
    std::string to;    // label of the image variety
    std::string type;  // "blow-down" | "regular" | "blow-up"
};

struct OrbitReport {
    std::vector<OrbitStep> steps;
    bool returned_to_start = false;
};

namespace detail {

struct LimitResult {
    std::vector<u64> limit;  // image along one direction as epsilon -> 0
    bool defined_at_point;   // plain image nonzero
};

inline LimitResult epsilon_limit(const std::vector<FpPoly>& comps, const std::vector<u64>& base,
                                 const std::vector<u64>& dir, const PrimeField& fld) {
    int p = (int)comps.size();
    std::vector<UniPoly> args;
    args.reserve(p);
    for (int i = 0; i < p; ++i) args.push_back(UniPoly(fld, {base[i], dir[i]}));
    std::vector<UniPoly> imgs;
    imgs.reserve(p);
    long long minval = -1;
    for (int k = 0; k < p; ++k) {
        imgs.push_back(eval_at_unipolys(comps[k], args, fld));
        const auto& c = imgs.back().coeffs();
        for (std::size_t i = 0; i < c.size(); ++i)
            if (c[i] != 0) {
                if (minval < 0 || (long long)i < minval) minval = (long long)i;
                break;
            }
    }
    if (minval < 0) throw std::logic_error("epsilon_limit: map vanishes identically along the curve");
    LimitResult r;
    r.limit.resize(p);
    for (int k = 0; k < p; ++k) r.limit[k] = imgs[k].coeff((std::size_t)minval);
    r.defined_at_point = minval == 0;
    return r;
}

}  // namespace detail

// Variety = point or an intersection of coordinate hyperplanes.
struct Variety {
    bool is_point = false;
    std::vector<u64> point;       // when is_point
    std::vector<int> plane_vars;  // zero-coordinate indices otherwise
};

class OrbitAnalyzer {
public:
    OrbitAnalyzer(const Pattern& pat, const PrimeField& fld) : pat_(pat), fld_(fld), pts_(singular_points(pat, fld)) {
        PolyMap J = hadamard_map(pat);
        PolyMap I = inverse_map(pat);
        for (const auto& c : J.components) jcomps_.push_back(to_field_poly(c, fld));
        for (const auto& c : I.components) icomps_.push_back(to_field_poly(c, fld));
    }

    // Orbit of Pi_k (or of a point), alternating J, I, ... as in the
    // singularity diagrams; stops at the first blow-up or after max_steps.
    OrbitReport orbit(const Variety& start, int max_steps = 10, u64 seed = 99) {
        OrbitReport rep;
        Rng rng(seed);
        Variety cur = start;
        bool use_j = true;
        std::vector<int> start_planes = start.is_point ? std::vector<int>{} : start.plane_vars;
        for (int step = 0; step < max_steps; ++step) {
            const auto& comps = use_j ? jcomps_ : icomps_;
            OrbitStep s;
            s.map = use_j ? "J" : "I";
            s.from = label(cur);
            if (!cur.is_point) {
                // sample generic points of the plane intersection
                std::vector<std::vector<u64>> images;
                bool constant = true;
                for (int t = 0; t < 4; ++t) {
                    std::vector<u64> x(pat_.num_classes());
                    for (auto& v : x) v = 1 + rng.below(fld_.modulus() - 1);
                    for (int z : cur.plane_vars) x[z] = 0;
                    std::vector<u64> img(pat_.num_classes(), 0);
                    bool nonzero = false;
                    for (int k = 0; k < pat_.num_classes(); ++k) {
                        std::vector<u64> xx(x);
                        img[k] = comps[k].eval(xx);
                        nonzero |= img[k] != 0;
                    }
                    if (!nonzero) throw std::logic_error("orbit: generic plane point is singular");
                    images.push_back(proj_normalize(fld_, img));
                    if (t > 0 && images[t] != images[0]) constant = false;
                }
                if (constant) {
                    cur = Variety{true, images[0], {}};
                    s.type = "blow-down";
                    s.to = label(cur);
                } else {
                    s.type = "regular";
                    s.to = "hypersurface";
                    rep.steps.push_back(s);
                    break;
                }
            } else {
                // epsilon limits along several random directions
                std::vector<std::vector<u64>> limits;
                bool all_equal = true;
                for (int t = 0; t < 6; ++t) {
                    std::vector<u64> dir(pat_.num_classes());
                    for (auto& v : dir) v = 1 + rng.below(fld_.modulus() - 1);
                    auto lr = detail::epsilon_limit(comps, cur.point, dir, fld_);
                    limits.push_back(proj_normalize(fld_, lr.limit));
                    if (t > 0 && limits[t] != limits[0]) all_equal = false;
                }
                if (all_equal) {
                    cur = Variety{true, limits[0], {}};
                    s.type = "regular";
                    s.to = label(cur);
                } else {
                    // blow-up: the image spans the common zero set of the limits
                    std::vector<int> zeros;
                    for (int k = 0; k < pat_.num_classes(); ++k) {
                        bool all_zero = true;
                        for (const auto& l : limits) all_zero &= l[k] == 0;
                        if (all_zero) zeros.push_back(k);
                    }
                    cur = Variety{false, {}, zeros};
                    s.type = "blow-up";
                    s.to = label(cur);
                    rep.steps.push_back(s);
                    rep.returned_to_start = !start.is_point && zeros == start_planes;
                    break;
                }
            }
            rep.steps.push_back(s);
            use_j = !use_j;
        }
        return rep;
    }

    std::string label(const Variety& v) const {
        if (!v.is_point) {
            std::string s = "Pi_";
            for (std::size_t i = 0; i < v.plane_vars.size(); ++i)
                s += (i ? "," : "") + std::to_string(v.plane_vars[i]);
            return s;
        }
        auto nv = proj_normalize(fld_, v.point);
        for (int k = 0; k < (int)pts_.P.size(); ++k)
            if (nv == proj_normalize(fld_, pts_.P[k])) return "P" + std::to_string(k);
        for (int k = 0; k < (int)pts_.Q.size(); ++k)
            if (nv == proj_normalize(fld_, pts_.Q[k])) return "Q" + std::to_string(k);
        // +-1 vector?
        bool pm = true;
        std::string pmstr = "[";
        for (std::size_t i = 0; i < nv.size(); ++i) {
            long long l = fld_.lift_signed(nv[i]);
            if (l != 1 && l != -1) pm = false;
            pmstr += (i ? "," : "") + std::string(l >= 0 ? "+" : "-") + "1";
        }
        if (pm) return "R" + pmstr + "]";
        return point_str(nv);
    }

    const SingularPointSet& points() const { return pts_; }

private:
    Pattern pat_;
    PrimeField fld_;
    SingularPointSet pts_;
    std::vector<FpPoly> jcomps_, icomps_;
};

inline OrbitReport orbit_report(const Pattern& pat, const PrimeField& fld, const Variety& start,
                                int max_steps = 10, u64 seed = 99) {
    OrbitAnalyzer an(pat, fld);
    return an.orbit(start, max_steps, seed);
}

}  // namespace entropik
