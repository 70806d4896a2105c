#include <catch2/catch_amalgamated.hpp>

#include "entropik/cmatrix.hpp"
#include "entropik/maps.hpp"
#include "entropik/multipoly.hpp"
#include "entropik/pattern.hpp"

using namespace entropik;

TEST_CASE("multipoly basics and content") {
    auto fld = find_field_with_root(5, 40);
    FpRing R(fld);
    auto x0 = FpPoly::variable(R, 2, 0);
    auto x1 = FpPoly::variable(R, 2, 1);
    auto f = add(mul(mul(x0, x0), x1), mul(x0, mul(x1, x1)));  // x0^2 x1 + x0 x1^2
    CHECK(f.content_monomial() == std::vector<unsigned>{1, 1});
    auto g = add(x0, x1);
    CHECK(g.content_monomial() == std::vector<unsigned>{0, 0});
    auto h = pow(x0, 3);
    CHECK(h.content_monomial() == std::vector<unsigned>{3, 0});
    CHECK_THROWS_AS(FpPoly(R, 2).content_monomial(), std::domain_error);

    // content divides exactly
    auto red = f.divide_by_monomial(f.content_monomial());
    CHECK(red.content_monomial() == std::vector<unsigned>{0, 0});
}

TEST_CASE("multipoly substitute is a ring homomorphism") {
    auto fld = find_field_with_root(3, 40);
    FpRing R(fld);
    Rng rng(17);
    int nv = 3;
    auto rnd = [&](int deg) {
        FpPoly f(R, nv);
        std::vector<FpPoly::Term> raw;
        for (int t = 0; t < 12; ++t) {
            std::vector<unsigned> e(nv);
            unsigned left = deg;
            for (int i = 0; i < nv; ++i) {
                e[i] = (unsigned)rng.below(left + 1);
                left -= e[i];
            }
            raw.push_back({f.pack(e), rng.below(fld.modulus())});
        }
        f.assign_normalized(std::move(raw));
        return f;
    };
    std::vector<FpPoly> images{rnd(2), rnd(2), rnd(2)};
    for (int it = 0; it < 10; ++it) {
        auto f = rnd(3), g = rnd(3);
        auto lhs = mul(f, g).substitute(images);
        auto rhs = mul(f.substitute(images), g.substitute(images));
        CHECK(lhs == rhs);
        CHECK(add(f, g).substitute(images) == add(f.substitute(images), g.substitute(images)));
    }
    // swap symmetry: f = x0+x1 under images (x1, x0)
    auto x0 = FpPoly::variable(R, 2, 0), x1 = FpPoly::variable(R, 2, 1);
    auto s = add(x0, x1);
    CHECK(s.substitute({x1, x0}) == s);
}

TEST_CASE("hadamard flip equals monomial substitution") {
    auto fld = find_field_with_root(5, 40);
    FpRing R(fld);
    int p = 3;
    Rng rng(4);
    FpPoly f(R, p);
    std::vector<FpPoly::Term> raw;
    for (int t = 0; t < 8; ++t) {
        unsigned a = (unsigned)rng.below(4), b = (unsigned)rng.below(4 - a);
        std::vector<unsigned> e{a, b, 3 - a - b};
        raw.push_back({f.pack(e), 1 + rng.below(fld.modulus() - 1)});
    }
    f.assign_normalized(std::move(raw));
    // J images: x_k -> prod_{j != k} x_j
    std::vector<FpPoly> jimg;
    for (int k = 0; k < p; ++k) {
        std::vector<unsigned> e(p, 1);
        e[k] = 0;
        jimg.push_back(FpPoly::from_exponents(R, p, e, 1));
    }
    CHECK(f.hadamard_flip() == f.substitute(jimg));
}

TEST_CASE("linear change of variables matches substitute") {
    auto fld = find_field_with_root(7, 40);
    FpRing R(fld);
    int p = 4;
    Rng rng(9);
    FpPoly f(R, p);
    std::vector<FpPoly::Term> raw;
    for (int t = 0; t < 20; ++t) {
        std::vector<unsigned> e(p);
        unsigned left = 5;
        for (int i = 0; i < p; ++i) {
            e[i] = (unsigned)rng.below(left + 1);
            left -= e[i];
        }
        raw.push_back({f.pack(e), rng.below(fld.modulus())});
    }
    f.assign_normalized(std::move(raw));
    std::vector<std::vector<u64>> C(p, std::vector<u64>(p));
    for (auto& row : C)
        for (auto& v : row) v = rng.below(fld.modulus());
    std::vector<FpPoly> limg;
    for (int i = 0; i < p; ++i) {
        FpPoly L(R, p);
        std::vector<FpPoly::Term> lt;
        for (int j = 0; j < p; ++j)
            if (C[i][j]) lt.push_back({L.key_unit(j), C[i][j]});
        L.assign_normalized(std::move(lt));
        limg.push_back(L);
    }
    CHECK(f.linear_change(C) == f.substitute(limg));
}

TEST_CASE("build_pattern class counts") {
    CHECK(build_pattern(5, PatternKind::CyclicSymmetric).num_classes() == 3);
    CHECK(build_pattern(6, PatternKind::CyclicSymmetric).num_classes() == 4);
    CHECK(build_pattern(4, PatternKind::Cyclic).num_classes() == 4);
    CHECK(build_pattern(5, PatternKind::General).num_classes() == 25);
    CHECK(build_pattern(5, PatternKind::Symmetric).num_classes() == 15);
    CHECK(build_pattern(9, PatternKind::CyclicSymmetric).num_classes() == 5);
}

TEST_CASE("pattern JSON round trip") {
    auto pat = build_pattern(6, PatternKind::CyclicSymmetric);
    auto j = pat.to_json();
    auto back = Pattern::from_json(j);
    CHECK(back.q() == 6);
    CHECK(back.classes() == pat.classes());
}

TEST_CASE("admissibility of the four families and a custom counterexample") {
    for (int q = 3; q <= 7; ++q) {
        CHECK(check_admissible(build_pattern(q, PatternKind::General)));
        CHECK(check_admissible(build_pattern(q, PatternKind::Symmetric)));
        CHECK(check_admissible(build_pattern(q, PatternKind::Cyclic)));
        CHECK(check_admissible(build_pattern(q, PatternKind::CyclicSymmetric)));
    }
    // "row 0 all equal, everything else free" is not stable under I
    int q = 3;
    std::vector<int> cls(q * q);
    int next = 1;
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j) cls[i * q + j] = (i == 0) ? 0 : next++;
    Pattern bad(q, PatternKind::Custom, cls);
    CHECK_FALSE(check_admissible(bad));
}

TEST_CASE("C matrix identities") {
    for (int q = 3; q <= 17; ++q) {
        auto pat = build_pattern(q, PatternKind::CyclicSymmetric);
        auto fld = find_field_with_root(q, 40);
        CMatrix C(pat, fld);  // constructor verifies C^2 = q Id
        CHECK(C.dim() == cs_class_count(q));
        for (int r = 0; r < C.dim(); ++r) CHECK(C.at(r, 0) == 1);
    }
    // q=5 row 0 is (1, 2, 2)
    auto fld = find_field_with_root(5, 40);
    CMatrix C5(build_pattern(5, PatternKind::CyclicSymmetric), fld);
    CHECK(C5.at(0, 0) == 1);
    CHECK(C5.at(0, 1) == 2);
    CHECK(C5.at(0, 2) == 2);
    // q=6 (even): last column alternates +-1
    auto fld6 = find_field_with_root(6, 40);
    CMatrix C6(build_pattern(6, PatternKind::CyclicSymmetric), fld6);
    for (int r = 0; r < C6.dim(); ++r)
        CHECK(C6.at(r, C6.dim() - 1) == (r % 2 == 0 ? 1 : fld6.modulus() - 1));
}

TEST_CASE("singular points: P, Q and the sign vectors R") {
    auto fld5 = find_field_with_root(5, 40);
    auto sp5 = singular_points(build_pattern(5, PatternKind::CyclicSymmetric), fld5);
    CHECK(sp5.P[0] == std::vector<u64>{1, 0, 0});
    CHECK(sp5.R_signed[1] == std::vector<long long>{1, 1, -1});
    CHECK(sp5.R_signed[2] == std::vector<long long>{1, -1, 1});

    auto fld7 = find_field_with_root(7, 40);
    auto sp7 = singular_points(build_pattern(7, PatternKind::CyclicSymmetric), fld7);
    CHECK(sp7.R_signed[1] == std::vector<long long>{1, -1, -1, 1});
    // Q_k = C.P_k projectively equals (1/q) C P_k
    CMatrix C(build_pattern(7, PatternKind::CyclicSymmetric), fld7);
    for (int k = 0; k < 4; ++k) {
        auto q1 = proj_normalize(fld7, C.apply(sp7.P[k]));
        u64 inv_q = fld7.inv(7);
        auto scaled = C.apply(sp7.P[k]);
        for (auto& v : scaled) v = fld7.mul(v, inv_q);
        CHECK(proj_equal(fld7, q1, scaled));
        CHECK(sp7.Q[k] == q1);
    }
}

TEST_CASE("hadamard map and kappa") {
    auto pat = build_pattern(5, PatternKind::CyclicSymmetric);  // p=3
    auto J = hadamard_map(pat);
    CHECK(J.degree() == 2);
    CHECK(J.components.size() == 3);
    // p=3: [x1 x2, x0 x2, x0 x1]
    RatRing R;
    CHECK(J.components[0] == RatPoly::from_exponents(R, 3, {0, 1, 1}, 1));
    CHECK(J.components[1] == RatPoly::from_exponents(R, 3, {1, 0, 1}, 1));
    CHECK(J.components[2] == RatPoly::from_exponents(R, 3, {1, 1, 0}, 1));

    // evaluation: J([1,2,3]) = [6,3,2]; fixed point at all-ones
    CHECK(evaluate(J, {1, 2, 3}) == ZPoint{6, 3, 2});
    CHECK(evaluate(J, {1, 1, 1}) == ZPoint{1, 1, 1});
    CHECK_THROWS_AS(evaluate(J, {1, 0, 0}), IndeterminateImage);

    // J(J(x)) = kappa_J(x) * x with kappa = prod x_i^{p-2}
    auto kappa = kappa_hadamard(pat);
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        ZPoint x{(long)(1 + rng.below(50)), (long)(1 + rng.below(50)), (long)(1 + rng.below(50))};
        std::vector<mpq_class> xq(x.begin(), x.end());
        ZPoint jx(3);
        for (int k = 0; k < 3; ++k) jx[k] = J.components[k].eval(xq).get_num();
        std::vector<mpq_class> jq(jx.begin(), jx.end());
        mpq_class kv = kappa.eval(xq);
        for (int k = 0; k < 3; ++k) CHECK(J.components[k].eval(jq) == kv * xq[k]);
    }
}

TEST_CASE("inverse map: q=3 general is the cofactor map of degree 2") {
    auto pat = build_pattern(3, PatternKind::General);
    auto I = inverse_map(pat);
    CHECK(I.degree() == 2);
    CHECK((int)I.components.size() == 9);
    // entry (0,0) cofactor: x4 x8 - x5 x7 (row-major classes)
    RatRing R;
    auto expect = sub(mul(RatPoly::variable(R, 9, 4), RatPoly::variable(R, 9, 8)),
                      mul(RatPoly::variable(R, 9, 5), RatPoly::variable(R, 9, 7)));
    CHECK(I.components[0] == expect);
}

TEST_CASE("inverse map reduces to degree p-1 on cyclic symmetric patterns") {
    for (int q : {4, 5, 6, 7}) {
        auto pat = build_pattern(q, PatternKind::CyclicSymmetric);
        auto I = inverse_map(pat);
        CHECK(I.degree() == pat.num_classes() - 1);
    }
}

TEST_CASE("inverse map agrees projectively with C J C on cyclic symmetric patterns") {
    for (int q : {4, 5, 6, 7, 9}) {
        auto pat = build_pattern(q, PatternKind::CyclicSymmetric);
        auto fld = find_field_with_root(q, 40);
        auto I = inverse_map(pat);
        CMatrix C(pat, fld);
        auto J = hadamard_map(pat);
        Rng rng(1000 + q);
        int p = pat.num_classes();
        int checked = 0;
        for (int t = 0; t < 100; ++t) {
            std::vector<u64> x(p);
            for (auto& v : x) v = 1 + rng.below(fld.modulus() - 1);
            std::vector<u64> cx = C.apply(x);
            bool zero = false;
            for (auto v : cx) zero |= v == 0;
            if (zero) continue;
            std::vector<u64> jcx;
            try {
                jcx = evaluate_mod(J, cx, fld);
            } catch (const IndeterminateImage&) {
                continue;
            }
            auto cjc = C.apply(jcx);
            auto ix = evaluate_mod(I, x, fld);
            CHECK(proj_equal(fld, cjc, ix));
            ++checked;
        }
        CHECK(checked >= 90);
    }
}

TEST_CASE("I is a projective involution on random points") {
    for (auto kind : {PatternKind::General, PatternKind::Symmetric, PatternKind::Cyclic,
                      PatternKind::CyclicSymmetric}) {
        auto pat = build_pattern(4, kind);
        auto I = inverse_map(pat);
        auto fld = find_field_with_root(4, 40);
        Rng rng(7);
        for (int t = 0; t < 20; ++t) {
            std::vector<u64> x(pat.num_classes());
            for (auto& v : x) v = 1 + rng.below(fld.modulus() - 1);
            auto ix = evaluate_mod(I, x, fld);
            auto iix = evaluate_mod(I, ix, fld);
            CHECK(proj_equal(fld, x, iix));
        }
    }
}

TEST_CASE("orbit diagrams for prime q") {
    auto pat = build_pattern(7, PatternKind::CyclicSymmetric);
    auto fld = find_field_with_root(7, 40);
    OrbitAnalyzer an(pat, fld);

    // Pi_0 -(J)-> P0 -(I)-> P0 -(J)-> blow-up back to Pi_0
    auto rep0 = an.orbit(Variety{false, {}, {0}});
    REQUIRE(rep0.steps.size() == 3);
    CHECK(rep0.steps[0].type == "blow-down");
    CHECK(rep0.steps[0].to == "P0");
    CHECK(rep0.steps[1].type == "regular");
    CHECK(rep0.steps[1].to == "P0");
    CHECK(rep0.steps[2].type == "blow-up");
    CHECK(rep0.steps[2].to == "Pi_0");
    CHECK(rep0.returned_to_start);

    // Pi_s -(J)-> P_s -(I)-> R_s -(J)-> R_s -(I)-> P_s -(J)-> blow-up Pi_s
    for (int s = 1; s <= 3; ++s) {
        auto rep = an.orbit(Variety{false, {}, {s}});
        REQUIRE(rep.steps.size() == 5);
        CHECK(rep.steps[0].type == "blow-down");
        CHECK(rep.steps[0].to == "P" + std::to_string(s));
        CHECK(rep.steps[1].type == "regular");
        CHECK(rep.steps[1].to.substr(0, 1) == "R");
        CHECK(rep.steps[2].type == "regular");
        CHECK(rep.steps[2].to == rep.steps[1].to);
        CHECK(rep.steps[3].type == "regular");
        CHECK(rep.steps[3].to == "P" + std::to_string(s));
        CHECK(rep.steps[4].type == "blow-up");
        CHECK(rep.steps[4].to == "Pi_" + std::to_string(s));
        CHECK(rep.returned_to_start);
    }
}

TEST_CASE("orbit diagram for q=9: Pi_3 ends in a codimension-2 blow-up") {
    auto pat = build_pattern(9, PatternKind::CyclicSymmetric);
    auto fld = find_field_with_root(9, 40);
    OrbitAnalyzer an(pat, fld);

    auto rep3 = an.orbit(Variety{false, {}, {3}});
    REQUIRE(rep3.steps.size() == 3);
    CHECK(rep3.steps[0].to == "P3");
    CHECK(rep3.steps[1].type == "regular");  // P3 -> Q3
    CHECK(rep3.steps[2].type == "blow-up");
    CHECK(rep3.steps[2].to == "Pi_0,3");

    // Pi_1 follows the 5-step pattern through a +-1 point
    auto rep1 = an.orbit(Variety{false, {}, {1}});
    REQUIRE(rep1.steps.size() == 5);
    CHECK(rep1.steps[1].to.substr(0, 1) == "R");
    CHECK(rep1.steps[4].to == "Pi_1");
}
