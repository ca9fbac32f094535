#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "cmdeg/picard.hpp"

using namespace cmdeg;

namespace {

DivisorClass C(const std::string& s) { return parse_class(s).cls; }
LinearForm F(const std::string& s) { return LinearForm::parse(s); }

LinearForm random_form(std::mt19937& rng, bool constant) {
    std::uniform_int_distribution<int> co(-6, 6), den(1, 3);
    LinearForm f = LinearForm::constant(frac(co(rng), den(rng)));
    if (!constant)
        for (int i = 1; i < 4; ++i) f.c[i] = frac(co(rng), den(rng));
    return f;
}

DivisorClass random_class(std::mt19937& rng, const BaseSurface& b, size_t n, bool constant) {
    std::vector<LinearForm> m;
    for (size_t i = 0; i < n; ++i) m.push_back(random_form(rng, constant));
    if (b.kind == SurfaceKind::P2) return DivisorClass::p2(random_form(rng, constant), m);
    return DivisorClass::fk(b.k, random_form(rng, constant), random_form(rng, constant), m);
}

}  // namespace

TEST_CASE("intersect examples") {
    CHECK(intersect(C("L(3;2,1^6)"), C("L(0;-1,0^6)")) == LinearForm::constant(2));
    CHECK(intersect(C("L(0;0^4,[0,-1],[0,0])"), C("L(0;0^4,[0,0],[0,-1])")).is_zero());
    CHECK(intersect(C("L(1)"), C("L(1)")) == LinearForm::constant(1));
    CHECK_THROWS(intersect(C("L(1;0)"), C("L(1;0,0)")));
    CHECK_THROWS(intersect(C("L(d;m)"), C("L(d;m)")));
    CHECK(intersect(C("O(1,0)"), C("O(0,1)")) == LinearForm::constant(1));
    CHECK(intersect(C("O_2(1,0)"), C("O_2(1,0)")) == LinearForm::constant(-2));
}

TEST_CASE("canonical examples") {
    Configuration c4{BaseSurface::p2(), {}, {}};
    for (int i = 0; i < 4; ++i) c4.points.push_back({"p" + std::to_string(i + 1)});
    DivisorClass K = canonical(c4);
    CHECK(K == C("L(-3;(-1)^4)"));
    CHECK(intersect(K, C("L(2m+a;m^4)")) == F("-2m-3a"));
    DivisorClass K0 = canonical(BaseSurface::hirzebruch(0), 0);
    CHECK(intersect(K0, K0) == LinearForm::constant(8));
    DivisorClass K7 = canonical(BaseSurface::p2(), 7);
    CHECK(-K7 == C("L(3;1^7)"));
    CHECK(intersect(K7, K7) == LinearForm::constant(2));
}

TEST_CASE("(-1)-curve examples") {
    CHECK(is_minus_one_curve(C("L(0;0^4,[0,-1],[0,0])")) == Tri::Yes);
    CHECK(is_minus_one_curve(C("L(1;1,1,0,0)")) == Tri::Yes);
    CHECK(is_minus_one_curve(C("L(2;1^4,0^4)")) == Tri::No);
    CHECK(is_minus_one_curve(C("O(0,1)([0,0]^2,[1,0],[0,0]^5)")) == Tri::Yes);
    CHECK(is_minus_one_curve(C("L(d;m)")) == Tri::Undecidable);
}

TEST_CASE("expected_h0 examples") {
    std::vector<LinearForm> m(10, LinearForm::constant(6));
    CHECK(expected_h0(DivisorClass::p2(LinearForm::constant(20), m)) == 21);
    CHECK(expected_h0(C("L(0;0^10)")) == 1);
    CHECK(expected_h0(C("L(3;1^10)")) == 0);
    CHECK_THROWS(expected_h0(C("L(3/2;0)")));
}

TEST_CASE("substitute examples") {
    CHECK(substitute(C("L(2m+a;m^4)"), 0, 6, 1) == C("L(13;6^4)"));
    CHECK(substitute(C("L(3/2d-5m;0)"), 3, 0, 0) == C("L(9/2;0)"));
    CHECK(substitute(C("L(4d-12m-3a;0)"), 20, 6, 0).d0 == LinearForm::constant(8));
}

TEST_CASE("notation parse and print") {
    auto p = parse_class("L(4d-12m-3a; 0, (d-3m-a)^6, [5m-3/2d-a, 5m-3/2d-a]^2)");
    CHECK(p.cls.mults.size() == 11);
    CHECK(p.group_sizes == std::vector<size_t>{1, 1, 1, 1, 1, 1, 1, 2, 2});
    std::string printed = print_class(p.cls, p.group_sizes);
    CHECK(printed == "L(4d-12m-3a; 0, (d-3m-a)^6, [-3/2d+5m-a, -3/2d+5m-a]^2)");
    CHECK(parse_class(printed).cls == p.cls);
    auto o = parse_class("O(0, 2a-8(19m-6d))([19/2m-3d, 19/2m-3d]^8)");
    CHECK(o.cls.base == BaseSurface::hirzebruch(0));
    CHECK(o.cls.mults.size() == 16);
    CHECK(parse_class(print_class(o.cls, o.group_sizes)).cls == o.cls);
    CHECK(parse_class("L(d; 2m+a, m^6)").cls.mults.size() == 7);
    CHECK(parse_class("\xE2\x84\x92(2m+a; m^4)").cls == C("L(2m+a;m^4)"));
    CHECK(print_class(C("L(-3;(-1)^4)")) == "L(-3; (-1)^4)");
    CHECK(print_class(C("O(0,0)")) == "O(0, 0)");
    CHECK_THROWS(parse_class("L(d; [m, m)"));
    CHECK_THROWS(parse_class("M(1)"));
}

TEST_CASE("property: print/parse round trip") {
    std::mt19937 rng(3);
    for (int it = 0; it < 500; ++it) {
        BaseSurface b = it % 3 == 0 ? BaseSurface::hirzebruch(it % 4) : BaseSurface::p2();
        size_t n = it % 9;
        DivisorClass L = random_class(rng, b, n, it % 2 == 0);
        if (it % 5 == 0 && n > 1) L.mults[1] = L.mults[0];
        std::vector<size_t> sizes;
        for (size_t left = n; left > 0;) {
            size_t g = std::min<size_t>(left, 1 + rng() % 2);
            sizes.push_back(g);
            left -= g;
        }
        ParsedClass p = parse_class(print_class(L, sizes));
        CHECK(p.cls == L);
    }
}

TEST_CASE("property: intersect symmetric and bilinear") {
    std::mt19937 rng(11);
    for (int it = 0; it < 1000; ++it) {
        BaseSurface b = it % 2 ? BaseSurface::hirzebruch(it % 5) : BaseSurface::p2();
        size_t n = it % 7;
        DivisorClass A = random_class(rng, b, n, false);
        DivisorClass B = random_class(rng, b, n, true);
        DivisorClass B2 = random_class(rng, b, n, true);
        Rational s = frac(static_cast<long>(rng() % 7) - 3, 1 + rng() % 3);
        CHECK(intersect(A, B) == intersect(B, A));
        CHECK(intersect(A, B + B2 * s) == intersect(A, B) + intersect(A, B2) * s);
        CHECK(intersect_q(A, A) == intersect_q(A, A));
    }
}

TEST_CASE("property: exceptional classes and canonical squares") {
    for (size_t n = 0; n <= 12; ++n) {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                auto Ei = DivisorClass::exceptional(BaseSurface::p2(), n, i);
                auto Ej = DivisorClass::exceptional(BaseSurface::p2(), n, j);
                CHECK(intersect(Ei, Ej) == LinearForm::constant(i == j ? -1 : 0));
                auto line = DivisorClass::p2(LinearForm::constant(1), std::vector<LinearForm>(n));
                CHECK(intersect(line, Ei).is_zero());
            }
    }
    for (long n = 0; n <= 20; ++n) {
        auto K = canonical(BaseSurface::p2(), n);
        CHECK(intersect(K, K) == LinearForm::constant(9 - n));
        for (int k = 0; k <= 20; ++k) {
            auto Kf = canonical(BaseSurface::hirzebruch(k), n);
            CHECK(intersect(Kf, Kf) == LinearForm::constant(8 - n));
        }
    }
}

TEST_CASE("property: (-1)-curve test invariant under permutations") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> co(-2, 3);
    for (int it = 0; it < 500; ++it) {
        size_t n = 1 + it % 6;
        std::vector<LinearForm> m;
        for (size_t i = 0; i < n; ++i) m.push_back(LinearForm::constant(co(rng)));
        DivisorClass L = DivisorClass::p2(LinearForm::constant(co(rng)), m);
        Tri t = is_minus_one_curve(L);
        std::shuffle(L.mults.begin(), L.mults.end(), rng);
        CHECK(is_minus_one_curve(L) == t);
    }
}

TEST_CASE("property: expected_h0 monotone") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> co(0, 8);
    for (int it = 0; it < 1000; ++it) {
        std::vector<LinearForm> m;
        for (int i = 0; i < 4; ++i) m.push_back(LinearForm::constant(co(rng)));
        DivisorClass L = DivisorClass::p2(LinearForm::constant(co(rng)), m);
        DivisorClass Ld = L;
        Ld.d0 += LinearForm::constant(1);
        CHECK(expected_h0(Ld) >= expected_h0(L));
        DivisorClass Lm = L;
        Lm.mults[it % 4] += LinearForm::constant(1);
        CHECK(expected_h0(Lm) <= expected_h0(L));
    }
}
