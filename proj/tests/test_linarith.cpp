#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "cmdeg/linarith.hpp"

using namespace cmdeg;

namespace {

LinearForm F(const std::string& s) { return LinearForm::parse(s); }
Inequality Q(const std::string& s) { return parse_inequality(s); }

struct IntIneq {
    long c0, cd, cm, ca;
    bool strict;
};

// grid oracle over {-R..R}^3 / q using integer arithmetic
bool brute_feasible(const std::vector<IntIneq>& sys, int R, long* wx = nullptr) {
    for (long q = 1; q <= 3; ++q)
        for (long x = -R; x <= R; ++x)
            for (long y = -R; y <= R; ++y)
                for (long z = -R; z <= R; ++z) {
                    bool ok = true;
                    for (auto& e : sys) {
                        long v = e.c0 * q + e.cd * x + e.cm * y + e.ca * z;
                        if (v < 0 || (e.strict && v == 0)) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) {
                        if (wx) wx[0] = x, wx[1] = y, wx[2] = z, wx[3] = q;
                        return true;
                    }
                }
    return false;
}

ConstraintSet to_cs(const std::vector<IntIneq>& sys) {
    ConstraintSet cs;
    for (auto& e : sys)
        cs.add(Inequality(LinearForm::make(e.c0, e.cd, e.cm, e.ca), e.strict ? Rel::Gt : Rel::Ge));
    return cs;
}

std::vector<IntIneq> random_system(std::mt19937& rng, int max_n = 6) {
    std::uniform_int_distribution<int> co(-5, 5), cnt(1, max_n), st(0, 1);
    std::vector<IntIneq> s;
    int n = cnt(rng);
    for (int i = 0; i < n; ++i) s.push_back({co(rng), co(rng), co(rng), co(rng), st(rng) == 1});
    return s;
}

}  // namespace

TEST_CASE("form text round trip") {
    for (const char* s : {"3/2d-5m-a", "4d-12m-3a-3", "0", "-d+4m+a", "a-2(19m-6d)", "5m-3/2d-a",
                          "(69/2)d-109m", "2(a+1)/3"}) {
        LinearForm f = F(s);
        CHECK(LinearForm::parse(f.str()) == f);
    }
    CHECK(F("a-2(19m-6d)") == LinearForm::make(0, 12, -38, 1));
    CHECK(F("3/2d") == LinearForm::make(0, Rational(3, 2), 0, 0));
    CHECK(F("5m-3/2d-a").str() == "-3/2d+5m-a");
    CHECK_THROWS(F("d*m"));
    CHECK_THROWS(F("d/m"));
}

TEST_CASE("rationals stay reduced") {
    Rational q = rat_parse("6/4");
    CHECK(q.get_num() == 3);
    CHECK(q.get_den() == 2);
    CHECK(rat_str(Rational(0)) == "0");
    CHECK(rat_str(Rational(-3, 2)) == "-3/2");
}

TEST_CASE("decide_feasible examples") {
    CHECK(decide_feasible({Q("d-3m-a>=0"), Q("a>=0"), Q("10m-3d>0")}));
    CHECK(!decide_feasible({Q("a>0"), Q("-a>=0")}));
    CHECK(decide_feasible({Q("a<5m-3/2d"), Q("a>4(19m-6d)+2"), Q("19m-6d>=0"), Q("43d<136m"),
                           Q("a<=69/2d-109m")}));
}

TEST_CASE("entails examples") {
    CHECK(entails({Q("d-3m-a>=0"), Q("a>=0")}, Q("d-3m>=0")));
    CHECK(!entails({Q("19m-6d>=0")}, Q("6d-19m>=0")));
    CHECK(entails({Q("6d-19m>0")}, Q("12d-38m>0")));
}

TEST_CASE("eliminate examples") {
    auto r = eliminate({Q("a>=0"), Q("3d-10m-2a>=0")}, kA);
    REQUIRE(r.size() == 1);
    CHECK(r.items()[0].normalized().form == Q("3d-10m>=0").normalized().form);

    auto r2 = eliminate({Q("a>4(19m-6d)+2"), Q("a<=69/2d-109m")}, kA);
    REQUIRE(r2.size() == 1);
    CHECK(r2.items()[0].strict());
    CHECK(r2.items()[0].normalized().form == Q("117/2d>185m+2").normalized().form);

    CHECK(eliminate({Q("a>=0")}, kA).empty());
}

TEST_CASE("mu_inf examples") {
    auto r1 = mu_inf({Q("3d-10m>=0"), Q("m>=1")});
    REQUIRE(r1.kind == MuResult::Kind::Finite);
    CHECK(r1.mu == Rational(10, 3));
    CHECK(r1.unbounded_d);
    CHECK(r1.unbounded_m);

    auto r2 = mu_inf({Q("117/2d-185m-2>0"), Q("136m-43d>0"), Q("m>=1")});
    REQUIRE(r2.kind == MuResult::Kind::Finite);
    CHECK(r2.mu == Rational(370, 117));
    CHECK(r2.unbounded_d);
    CHECK(r2.unbounded_m);

    auto r3 = mu_inf({Q("d>=0"), Q("m>=1")});
    REQUIRE(r3.kind == MuResult::Kind::Finite);
    CHECK(r3.mu == 0);

    CHECK(mu_inf({Q("m>=0"), Q("-m>=0")}).kind == MuResult::Kind::Infeasible);
    CHECK(mu_inf({Q("m>=1")}).kind == MuResult::Kind::MinusInfinity);
    CHECK_THROWS(mu_inf({Q("a>=0")}));
}

TEST_CASE("mu_inf bounded region") {
    auto r = mu_inf({Q("m>=1"), Q("2-m>=0"), Q("d-3m>=0"), Q("10-d>=0")});
    REQUIRE(r.kind == MuResult::Kind::Finite);
    CHECK(r.mu == 3);
    CHECK(!r.unbounded_d);
    CHECK(!r.unbounded_m);
}

TEST_CASE("property: FM feasibility vs grid oracle") {
    std::mt19937 rng(1234);
    int agree_feasible = 0, agree_infeasible = 0;
    for (int it = 0; it < 1000; ++it) {
        auto sys = random_system(rng);
        ConstraintSet cs = to_cs(sys);
        bool fm = decide_feasible(cs);
        bool bf = brute_feasible(sys, 20);
        if (bf) {
            CHECK(fm);
            ++agree_feasible;
        }
        if (fm) {
            auto w = find_witness(cs);
            REQUIRE(w.has_value());
            CHECK(cs.holds(w->d, w->m, w->a));
        } else {
            CHECK(!bf);
            ++agree_infeasible;
        }
    }
    CHECK(agree_feasible > 100);
    CHECK(agree_infeasible > 10);
}

TEST_CASE("property: entails is monotone") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> co(-5, 5);
    for (int it = 0; it < 400; ++it) {
        auto sys = random_system(rng, 5);
        ConstraintSet cs = to_cs(sys);
        Inequality q(LinearForm::make(co(rng), co(rng), co(rng), co(rng)), Rel::Ge);
        bool e = entails(cs, q);
        ConstraintSet more = cs;
        for (auto& x : random_system(rng, 2))
            more.add(Inequality(LinearForm::make(x.c0, x.cd, x.cm, x.ca), x.strict ? Rel::Gt : Rel::Ge));
        if (e) CHECK(entails(more, q));
    }
}

TEST_CASE("property: eliminate preserves the projection") {
    std::mt19937 rng(7);
    for (int it = 0; it < 300; ++it) {
        auto sys = random_system(rng);
        ConstraintSet cs = to_cs(sys);
        ConstraintSet proj = eliminate(cs, kA);
        for (auto& q : proj.items()) CHECK(q.form.ca() == 0);
        for (long x = -6; x <= 6; ++x)
            for (long y = -6; y <= 6; ++y) {
                bool in_proj = proj.holds(x, y, 0);
                // exact 1-D search over a
                ConstraintSet slice;
                for (auto& q : cs.items()) {
                    Inequality s = q;
                    s.form.c[0] += s.form.cd() * x + s.form.cm() * y;
                    s.form.c[1] = 0;
                    s.form.c[2] = 0;
                    slice.add(s);
                }
                bool extends = decide_feasible(slice);
                CHECK(in_proj == extends);
            }
    }
}

TEST_CASE("property: mu_inf invariant under rescaling and duplication") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> co(-5, 5), sc(1, 7);
    int finite = 0;
    for (int it = 0; it < 300; ++it) {
        ConstraintSet p;
        int n = 1 + it % 4;
        for (int i = 0; i < n; ++i)
            p.add(Inequality(LinearForm::make(co(rng), co(rng), co(rng), 0), i % 2 ? Rel::Gt : Rel::Ge));
        p.add(Q("m>=1"));
        auto r = mu_inf(p);
        ConstraintSet p2;
        for (auto& q : p.items()) {
            Inequality s = q;
            s.form = s.form * frac(sc(rng), sc(rng));
            p2.add(s);
        }
        std::vector<Inequality> dup = p2.items();
        ConstraintSet p3;
        for (auto& q : dup) p3.add(q);
        for (auto& q : dup) p3.add(q);
        auto r2 = mu_inf(p3);
        CHECK(static_cast<int>(r.kind) == static_cast<int>(r2.kind));
        if (r.kind == MuResult::Kind::Finite) {
            ++finite;
            CHECK(r.mu == r2.mu);
            CHECK(r.unbounded_d == r2.unbounded_d);
            CHECK(r.unbounded_m == r2.unbounded_m);
        }
    }
    CHECK(finite > 20);
}
