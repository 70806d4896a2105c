#include <catch2/catch_amalgamated.hpp>

#include "entropik/field.hpp"
#include "entropik/ntt.hpp"
#include "entropik/rng.hpp"
#include "entropik/unipoly.hpp"

using namespace entropik;

TEST_CASE("primality and modular exponentiation") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(31));
    CHECK(is_prime_u64(4179340454199820289ull));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(561));          // Carmichael
    CHECK_FALSE(is_prime_u64(3215031751ull));  // strong pseudoprime to small bases
    CHECK(powmod_u64(2, 5, 31) == 1);
}

TEST_CASE("find_field_with_root basic cases") {
    SECTION("q=5, min_bits=4 gives 31") {
        auto f = find_field_with_root(5, 4);
        CHECK(f.modulus() == 31);
        CHECK(f.pow(f.root(), 5) == 1);
        CHECK(f.root() != 1);
    }
    SECTION("q=7, min_bits=20") {
        auto f = find_field_with_root(7, 20);
        CHECK(f.modulus() > (1ull << 20));
        CHECK(f.modulus() % 7 == 1);
        CHECK(f.pow(f.root(), 7) == 1);
        CHECK(f.root() != 1);
    }
    SECTION("q=2, min_bits=2: omega is -1") {
        auto f = find_field_with_root(2, 2);
        CHECK(f.modulus() >= 5);
        CHECK(f.root() == f.modulus() - 1);
    }
    SECTION("two-adic request") {
        auto f = find_field_with_root(7, 40, 20);
        CHECK((f.modulus() - 1) % (7ull << 20) == 0);
        CHECK(f.two_adicity() >= 20);
    }
    SECTION("independent trial fields differ") {
        auto f0 = find_field_with_root(5, 30, 1, 0);
        auto f1 = find_field_with_root(5, 30, 1, 1);
        CHECK(f0.modulus() != f1.modulus());
    }
}

TEST_CASE("field axioms sampled") {
    auto f = find_field_with_root(7, 40);
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        u64 a = rng.below(f.modulus()), b = rng.below(f.modulus()), c = rng.below(f.modulus());
        CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
        if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
    }
}

TEST_CASE("montgomery round trip") {
    Montgomery m(find_field_with_root(5, 40).modulus());
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        u64 a = rng.below(m.p), b = rng.below(m.p);
        CHECK(m.from(m.mul(m.to(a), m.to(b))) == mulmod_u64(a, b, m.p));
    }
}

static UniPoly rnd_poly(const PrimeField& f, long long deg, Rng& rng) { return random_poly(f, deg, rng); }

TEST_CASE("ntt multiplication agrees with naive") {
    auto f = find_field_with_root(5, 50, 22);
    Rng rng(11);
    for (long long da : {33LL, 100LL, 257LL, 1000LL}) {
        for (long long db : {35LL, 99LL, 513LL}) {
            UniPoly a = rnd_poly(f, da, rng), b = rnd_poly(f, db, rng);
            UniPoly naive(f, detail::mul_naive(f, a.coeffs(), b.coeffs()));
            CHECK(mul(a, b) == naive);
        }
    }
}

TEST_CASE("series inverse and fast division") {
    auto f = find_field_with_root(3, 50, 22);
    Rng rng(5);
    UniPoly g = rnd_poly(f, 300, rng);
    if (g.coeff(0) == 0) g = add(g, UniPoly::constant(f, 1));
    UniPoly ig = series_inverse(g, 500);
    UniPoly prod = low_part(mul(g, ig), 500);
    CHECK(prod == UniPoly::constant(f, 1));

    for (auto [da, db] : std::vector<std::pair<long long, long long>>{{700, 300}, {2000, 150}, {1500, 1400}}) {
        UniPoly a = rnd_poly(f, da, rng), b = rnd_poly(f, db, rng);
        UniPoly q(f), r(f), qn(f), rn(f);
        divrem(a, b, q, r);
        detail::divrem_naive(a, b, qn, rn);
        CHECK(q == qn);
        CHECK(r == rn);
        CHECK(add(mul(b, q), r) == a);
    }
}

// Resultant by classical remainder sequence: nonzero iff gcd is trivial.
static u64 resultant(UniPoly a, UniPoly b) {
    const auto& f = a.field();
    u64 res = 1;
    while (!b.is_zero()) {
        if (b.degree() == 0) {
            res = f.mul(res, f.pow(b.coeff(0), (u64)a.degree()));
            return res;
        }
        UniPoly q(f), r(f);
        divrem(a, b, q, r);
        if (r.is_zero()) return 0;
        u64 s = ((a.degree() * b.degree()) & 1) ? f.neg(1) : 1;
        res = f.mul(res, f.mul(s, f.pow(b.leading(), (u64)(a.degree() - r.degree()))));
        a = std::move(b);
        b = std::move(r);
    }
    return 0;
}

TEST_CASE("gcd spec examples over F_31") {
    auto f = find_field_with_root(5, 4);
    REQUIRE(f.modulus() == 31);
    auto lin = [&](u64 root) { return UniPoly(f, {f.neg(root), 1}); };
    UniPoly a = mul(lin(1), lin(2));
    UniPoly b = mul(lin(1), lin(3));
    CHECK(gcd(a, b) == lin(1));
    CHECK(gcd(scale(a, 17), UniPoly(f)) == monic(a));

    Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        UniPoly u = rnd_poly(f, 2, rng), v = rnd_poly(f, 2, rng);
        UniPoly g = gcd(u, v);
        if (resultant(u, v) != 0)
            CHECK(g.degree() == 0);
        else
            CHECK(g.degree() > 0);
    }
}

TEST_CASE("gcd multiplicative property") {
    auto f = find_field_with_root(3, 40, 22);
    Rng rng(29);
    for (int i = 0; i < 40; ++i) {
        UniPoly a = rnd_poly(f, 5 + (long long)rng.below(40), rng);
        UniPoly b = rnd_poly(f, 5 + (long long)rng.below(40), rng);
        UniPoly h = rnd_poly(f, 1 + (long long)rng.below(30), rng);
        CHECK(gcd(mul(a, h), mul(b, h)) == mul(monic(h), gcd(a, b)));
    }
}

TEST_CASE("half-gcd stress against classical Euclid") {
    // Small prime fields make abnormal remainder sequences frequent; a low
    // cutoff forces the recursive path.
    int saved = detail::hgcd_cutoff_deg;
    detail::hgcd_cutoff_deg = 4;
    for (u64 p : {3ull, 5ull, 13ull}) {
        PrimeField f(p);
        Rng rng(p * 101);
        for (int i = 0; i < 300; ++i) {
            long long da = 2 + (long long)rng.below(120);
            long long db = 1 + (long long)rng.below((u64)da);
            UniPoly a = rnd_poly(f, da, rng), b = rnd_poly(f, db, rng);
            UniPoly g_fast = gcd(a, b);
            // classical
            UniPoly x = a, y = b, q(f), r(f);
            while (!y.is_zero()) {
                divrem(x, y, q, r);
                x = std::move(y);
                y = std::move(r);
            }
            CHECK(g_fast == monic(x));
        }
        // structured: large common factors
        for (int i = 0; i < 60; ++i) {
            UniPoly h = rnd_poly(f, 10 + (long long)rng.below(60), rng);
            UniPoly a = mul(h, rnd_poly(f, 1 + (long long)rng.below(40), rng));
            UniPoly b = mul(h, rnd_poly(f, 1 + (long long)rng.below(40), rng));
            UniPoly g = gcd(a, b);
            UniPoly qq(f), rr(f);
            divrem(g, monic(h), qq, rr);
            // g must be a multiple of every common divisor; h | g
            UniPoly q2(f), r2(f);
            divrem(a, g, q2, r2);
            CHECK(r2.is_zero());
            divrem(b, g, q2, r2);
            CHECK(r2.is_zero());
            divrem(g, gcd(g, monic(h)), q2, r2);
            CHECK(gcd(g, monic(h)) == monic(h));
        }
    }
    detail::hgcd_cutoff_deg = saved;
}

TEST_CASE("large gcd exercises recursive half-gcd") {
    auto f = find_field_with_root(7, 55, 24);
    Rng rng(4242);
    UniPoly h = rnd_poly(f, 4000, rng);
    UniPoly a = mul(h, rnd_poly(f, 3000, rng));
    UniPoly b = mul(h, rnd_poly(f, 2500, rng));
    UniPoly g = gcd(a, b);
    CHECK(g.degree() >= 4000);  // h | g, and cofactors are coprime w.h.p. so equality
    CHECK(g == monic(h));
    CHECK(exact_div(a, g).degree() == 3000);
}

TEST_CASE("lcm and content") {
    auto f = find_field_with_root(5, 40, 22);
    Rng rng(55);
    UniPoly a = rnd_poly(f, 30, rng), b = rnd_poly(f, 25, rng);
    UniPoly l = lcm(a, b);
    CHECK(exact_div(mul(a, b), gcd(a, b)) == l);
    UniPoly g = rnd_poly(f, 7, rng);
    std::vector<UniPoly> fam{mul(a, g), mul(b, g), mul(add(a, b), g)};
    UniPoly c = content_of(fam);
    UniPoly q(f), r(f);
    divrem(c, monic(g), q, r);
    CHECK(r.is_zero());
}
