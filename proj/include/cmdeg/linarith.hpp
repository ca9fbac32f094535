#pragma once

#include <gmpxx.h>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cmdeg {

using Rational = mpq_class;

inline Rational frac(long n, long d) {
    Rational q(n, d);
    q.canonicalize();
    return q;
}
std::string rat_str(const Rational& q);
Rational rat_parse(const std::string& s);

enum Var { kConst = 0, kD = 1, kM = 2, kA = 3 };

// c0 + cd*d + cm*m + ca*a
struct LinearForm {
    std::array<Rational, 4> c;

    LinearForm() { for (auto& x : c) x = 0; }
    static LinearForm constant(const Rational& v);
    static LinearForm var(Var v, const Rational& coeff = 1);
    static LinearForm make(const Rational& c0, const Rational& cd, const Rational& cm,
                           const Rational& ca);

    const Rational& c0() const { return c[0]; }
    const Rational& cd() const { return c[1]; }
    const Rational& cm() const { return c[2]; }
    const Rational& ca() const { return c[3]; }

    bool is_zero() const;
    bool is_constant() const;
    Rational eval(const Rational& d, const Rational& m, const Rational& a) const;
    // lcm of coefficient denominators
    mpz_class denominator_lcm() const;

    LinearForm operator+(const LinearForm& o) const;
    LinearForm operator-(const LinearForm& o) const;
    LinearForm operator-() const;
    LinearForm operator*(const Rational& s) const;
    LinearForm& operator+=(const LinearForm& o);
    LinearForm& operator-=(const LinearForm& o);
    bool operator==(const LinearForm& o) const;
    bool operator!=(const LinearForm& o) const { return !(*this == o); }
    bool operator<(const LinearForm& o) const;

    // reference-style text, e.g. "3/2d-5m-a+1"
    std::string str() const;
    static LinearForm parse(const std::string& s);
};

inline LinearForm operator*(const Rational& s, const LinearForm& f) { return f * s; }

enum class Rel { Ge, Gt };

struct Inequality {
    LinearForm form;
    Rel rel = Rel::Ge;
    std::string provenance;

    Inequality() = default;
    Inequality(LinearForm f, Rel r, std::string p = {})
        : form(std::move(f)), rel(r), provenance(std::move(p)) {}

    bool strict() const { return rel == Rel::Gt; }
    Inequality negated() const;
    // positive rescaling so the first nonzero of (d, m, a, const) is +-1
    Inequality normalized() const;
    bool holds(const Rational& d, const Rational& m, const Rational& a) const;
    std::string str() const;
};

// "lhs >= rhs" style helpers
Inequality ge(const LinearForm& lhs, const LinearForm& rhs, std::string prov = {});
Inequality gt(const LinearForm& lhs, const LinearForm& rhs, std::string prov = {});
// parse "a < 5m-3/2d", "19m-6d >= 0", etc.
Inequality parse_inequality(const std::string& s, std::string prov = {});

class ConstraintSet {
public:
    ConstraintSet() = default;
    ConstraintSet(std::initializer_list<Inequality> l) {
        for (auto& q : l) add(q);
    }

    // returns false if an identical (normalized) inequality was already present
    bool add(const Inequality& q);
    void add_all(const ConstraintSet& o);
    const std::vector<Inequality>& items() const { return items_; }
    size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    ConstraintSet closure() const;
    bool holds(const Rational& d, const Rational& m, const Rational& a) const;

private:
    std::vector<Inequality> items_;
};

ConstraintSet eliminate(const ConstraintSet& cs, Var v);
bool decide_feasible(const ConstraintSet& cs);
bool entails(const ConstraintSet& cs, const Inequality& q);

struct Witness {
    Rational d, m, a;
};
std::optional<Witness> find_witness(const ConstraintSet& cs);

struct MuResult {
    enum class Kind { Finite, MinusInfinity, Infeasible } kind = Kind::Infeasible;
    Rational mu;
    bool unbounded_d = false;
    bool unbounded_m = false;
    std::vector<Inequality> binding;
};

MuResult mu_inf(const ConstraintSet& polyhedron2d);

}  // namespace cmdeg
