#include "cmdeg/picard.hpp"

#include <set>
#include <stdexcept>

namespace cmdeg {

std::string BaseSurface::str() const {
    return kind == SurfaceKind::P2 ? "P2" : "F" + std::to_string(k);
}

int Configuration::index_of(const std::string& id) const {
    for (size_t i = 0; i < points.size(); ++i)
        if (points[i].id == id) return static_cast<int>(i);
    return -1;
}

bool Configuration::has_children(const std::string& id) const {
    for (auto& p : points)
        if (p.parent && *p.parent == id) return true;
    return false;
}

std::vector<std::vector<size_t>> Configuration::groups() const {
    std::vector<std::vector<size_t>> out;
    for (size_t i = 0; i < points.size(); ++i) {
        if (!out.empty() && points[i].parent && *points[i].parent == points[out.back().back()].id)
            out.back().push_back(i);
        else
            out.push_back({i});
    }
    return out;
}

void Configuration::validate() const {
    std::set<std::string> seen;
    for (auto& p : points) {
        if (!seen.insert(p.id).second) throw std::invalid_argument("duplicate point id " + p.id);
        if (p.parent && !seen.count(*p.parent))
            throw std::invalid_argument("point " + p.id + " precedes or lacks its parent");
        if (p.directed_to && *p.directed_to == p.id)
            throw std::invalid_argument("point " + p.id + " directed to itself");
    }
    for (auto& p : points)
        if (p.directed_to && index_of(*p.directed_to) < 0)
            throw std::invalid_argument("point " + p.id + " directed to unknown point");
}

Quadratic::Quadratic() {
    for (auto& r : q)
        for (auto& x : r) x = 0;
}

Quadratic Quadratic::product(const LinearForm& x, const LinearForm& y) {
    Quadratic r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (x.c[i] == 0 || y.c[j] == 0) continue;
            int lo = std::min(i, j), hi = std::max(i, j);
            r.q[lo][hi] += x.c[i] * y.c[j];
        }
    return r;
}

Quadratic Quadratic::operator+(const Quadratic& o) const {
    Quadratic r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.q[i][j] = q[i][j] + o.q[i][j];
    return r;
}

Quadratic Quadratic::operator-(const Quadratic& o) const {
    Quadratic r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.q[i][j] = q[i][j] - o.q[i][j];
    return r;
}

bool Quadratic::operator==(const Quadratic& o) const {
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (q[i][j] != o.q[i][j]) return false;
    return true;
}

bool Quadratic::is_linear() const {
    for (int i = 1; i < 4; ++i)
        for (int j = i; j < 4; ++j)
            if (q[i][j] != 0) return false;
    return true;
}

LinearForm Quadratic::linear() const {
    if (!is_linear()) throw std::domain_error("intersection of two parametric classes is not linear");
    LinearForm f;
    for (int j = 0; j < 4; ++j) f.c[j] = q[0][j];
    return f;
}

bool Quadratic::is_constant(const Rational& v) const {
    if (!is_linear()) return false;
    LinearForm f = linear();
    return f.is_constant() && f.c0() == v;
}

DivisorClass DivisorClass::p2(LinearForm d, std::vector<LinearForm> m) {
    DivisorClass c;
    c.base = BaseSurface::p2();
    c.d0 = std::move(d);
    c.mults = std::move(m);
    return c;
}

DivisorClass DivisorClass::fk(int k, LinearForm e, LinearForm f, std::vector<LinearForm> m) {
    DivisorClass c;
    c.base = BaseSurface::hirzebruch(k);
    c.d0 = std::move(e);
    c.d1 = std::move(f);
    c.mults = std::move(m);
    return c;
}

DivisorClass DivisorClass::zero(const BaseSurface& b, size_t n) {
    DivisorClass c;
    c.base = b;
    c.mults.assign(n, LinearForm());
    return c;
}

DivisorClass DivisorClass::exceptional(const BaseSurface& b, size_t n, size_t i) {
    DivisorClass c = zero(b, n);
    c.mults.at(i) = LinearForm::constant(-1);
    return c;
}

bool DivisorClass::is_zero() const {
    if (!d0.is_zero() || !d1.is_zero()) return false;
    for (auto& m : mults)
        if (!m.is_zero()) return false;
    return true;
}

bool DivisorClass::is_constant() const {
    if (!d0.is_constant() || !d1.is_constant()) return false;
    for (auto& m : mults)
        if (!m.is_constant()) return false;
    return true;
}

void DivisorClass::check_compatible(const DivisorClass& o) const {
    if (!(base == o.base) || mults.size() != o.mults.size())
        throw std::invalid_argument("classes on different configurations: " + print_class(*this) +
                                    " vs " + print_class(o));
}

DivisorClass DivisorClass::operator+(const DivisorClass& o) const {
    check_compatible(o);
    DivisorClass r = *this;
    r.d0 += o.d0;
    r.d1 += o.d1;
    for (size_t i = 0; i < mults.size(); ++i) r.mults[i] += o.mults[i];
    return r;
}

DivisorClass DivisorClass::operator-(const DivisorClass& o) const { return *this + (-o); }

DivisorClass DivisorClass::operator-() const { return *this * Rational(-1); }

DivisorClass DivisorClass::operator*(const Rational& s) const {
    DivisorClass r = *this;
    r.d0 = d0 * s;
    r.d1 = d1 * s;
    for (auto& m : r.mults) m = m * s;
    return r;
}

DivisorClass DivisorClass::scaled(const LinearForm& coeff) const {
    if (!is_constant()) {
        if (coeff.is_constant()) return *this * coeff.c0();
        throw std::domain_error("cannot scale a parametric class by a parametric coefficient");
    }
    DivisorClass r = *this;
    r.d0 = coeff * d0.c0();
    r.d1 = coeff * d1.c0();
    for (size_t i = 0; i < mults.size(); ++i) r.mults[i] = coeff * mults[i].c0();
    return r;
}

bool DivisorClass::operator==(const DivisorClass& o) const {
    return base == o.base && d0 == o.d0 && d1 == o.d1 && mults == o.mults;
}

mpz_class DivisorClass::denominator_lcm() const {
    mpz_class l = 1;
    auto up = [&](const LinearForm& f) {
        mpz_class x = f.denominator_lcm();
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_mpz_t());
    };
    up(d0);
    up(d1);
    for (auto& m : mults) up(m);
    return l;
}

Quadratic intersect_q(const DivisorClass& A, const DivisorClass& B) {
    A.check_compatible(B);
    Quadratic r;
    if (A.base.kind == SurfaceKind::P2) {
        r = Quadratic::product(A.d0, B.d0);
    } else {
        r = Quadratic::product(A.d0, B.d1) + Quadratic::product(A.d1, B.d0);
        if (A.base.k != 0) {
            Quadratic ee = Quadratic::product(A.d0 * Rational(A.base.k), B.d0);
            r = r - ee;
        }
    }
    for (size_t i = 0; i < A.mults.size(); ++i) r = r - Quadratic::product(A.mults[i], B.mults[i]);
    return r;
}

LinearForm intersect(const DivisorClass& A, const DivisorClass& B) { return intersect_q(A, B).linear(); }

DivisorClass canonical(const BaseSurface& b, size_t n) {
    std::vector<LinearForm> m(n, LinearForm::constant(-1));
    if (b.kind == SurfaceKind::P2) return DivisorClass::p2(LinearForm::constant(-3), m);
    return DivisorClass::fk(b.k, LinearForm::constant(-2), LinearForm::constant(-(b.k + 2)), m);
}

DivisorClass canonical(const Configuration& c) { return canonical(c.base, c.size()); }

Tri is_minus_one_curve(const DivisorClass& C, const ConstraintSet&) {
    Quadratic self = intersect_q(C, C);
    Quadratic kc = intersect_q(C, canonical(C.base, C.mults.size()));
    bool ok = self.is_constant(-1) && kc.is_constant(-1);
    if (ok) return Tri::Yes;
    if (C.is_constant()) return Tri::No;
    return Tri::Undecidable;
}

namespace {

long to_long_int(const LinearForm& f) {
    if (!f.is_constant() || f.c0().get_den() != 1)
        throw std::invalid_argument("expected an integer value, got " + f.str());
    return f.c0().get_num().get_si();
}

}  // namespace

long expected_h0(const DivisorClass& L) {
    if (L.base.kind != SurfaceKind::P2) throw std::invalid_argument("expected_h0 needs a P2 blow-up");
    long d = to_long_int(L.d0);
    long v = d * (d + 3) / 2 + 1;
    for (auto& m : L.mults) {
        long x = to_long_int(m);
        v -= x * (x + 1) / 2;
    }
    return std::max(0L, v);
}

DivisorClass substitute(const DivisorClass& L, const Rational& d, const Rational& m, const Rational& a) {
    DivisorClass r = L;
    auto ev = [&](const LinearForm& f) { return LinearForm::constant(f.eval(d, m, a)); };
    r.d0 = ev(L.d0);
    r.d1 = ev(L.d1);
    for (auto& x : r.mults) x = ev(x);
    return r;
}

}  // namespace cmdeg

namespace cmdeg {

Configuration configuration_from_groups(const BaseSurface& b, const std::vector<size_t>& group_sizes) {
    Configuration c{b, {}, {}};
    for (size_t g : group_sizes)
        for (size_t t = 0; t < g; ++t) {
            PointNode p{"p" + std::to_string(c.size() + 1)};
            if (t > 0) p.parent = c.points.back().id;
            c.points.push_back(p);
        }
    return c;
}

}  // namespace cmdeg
