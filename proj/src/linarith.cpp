#include "cmdeg/linarith.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <stdexcept>

namespace cmdeg {

std::string rat_str(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rat_parse(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw std::invalid_argument("bad rational: " + s);
    q.canonicalize();
    return q;
}

LinearForm LinearForm::constant(const Rational& v) {
    LinearForm f;
    f.c[0] = v;
    return f;
}

LinearForm LinearForm::var(Var v, const Rational& coeff) {
    LinearForm f;
    f.c[v] = coeff;
    return f;
}

LinearForm LinearForm::make(const Rational& c0, const Rational& cd, const Rational& cm,
                            const Rational& ca) {
    LinearForm f;
    f.c = {c0, cd, cm, ca};
    return f;
}

bool LinearForm::is_zero() const {
    for (auto& x : c)
        if (x != 0) return false;
    return true;
}

bool LinearForm::is_constant() const { return c[1] == 0 && c[2] == 0 && c[3] == 0; }

Rational LinearForm::eval(const Rational& d, const Rational& m, const Rational& a) const {
    return c[0] + c[1] * d + c[2] * m + c[3] * a;
}

mpz_class LinearForm::denominator_lcm() const {
    mpz_class l = 1;
    for (auto& x : c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    return l;
}

LinearForm LinearForm::operator+(const LinearForm& o) const {
    LinearForm r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] + o.c[i];
    return r;
}

LinearForm LinearForm::operator-(const LinearForm& o) const {
    LinearForm r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] - o.c[i];
    return r;
}

LinearForm LinearForm::operator-() const {
    LinearForm r;
    for (int i = 0; i < 4; ++i) r.c[i] = -c[i];
    return r;
}

LinearForm LinearForm::operator*(const Rational& s) const {
    LinearForm r;
    for (int i = 0; i < 4; ++i) r.c[i] = c[i] * s;
    return r;
}

LinearForm& LinearForm::operator+=(const LinearForm& o) {
    for (int i = 0; i < 4; ++i) c[i] += o.c[i];
    return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
    for (int i = 0; i < 4; ++i) c[i] -= o.c[i];
    return *this;
}

bool LinearForm::operator==(const LinearForm& o) const {
    for (int i = 0; i < 4; ++i)
        if (c[i] != o.c[i]) return false;
    return true;
}

bool LinearForm::operator<(const LinearForm& o) const {
    for (int i = 0; i < 4; ++i) {
        if (c[i] < o.c[i]) return true;
        if (o.c[i] < c[i]) return false;
    }
    return false;
}

std::string LinearForm::str() const {
    static const char* names[4] = {"", "d", "m", "a"};
    std::string out;
    auto emit = [&](const Rational& k, int v) {
        if (k == 0) return;
        bool neg = k < 0;
        Rational ak = neg ? Rational(-k) : k;
        std::string body;
        if (v == 0)
            body = rat_str(ak);
        else
            body = (ak == 1 ? std::string() : rat_str(ak)) + names[v];
        if (neg)
            out += "-";
        else if (!out.empty())
            out += "+";
        out += body;
    };
    emit(c[1], 1);
    emit(c[2], 2);
    emit(c[3], 3);
    emit(c[0], 0);
    return out.empty() ? "0" : out;
}

namespace {

struct FormParser {
    const std::string& s;
    size_t i = 0;

    explicit FormParser(const std::string& str) : s(str) {}

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("cannot parse form '" + s + "': " + why);
    }
    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    char peek() {
        skip();
        return i < s.size() ? s[i] : '\0';
    }
    bool starts_factor(char ch) const {
        return std::isdigit(static_cast<unsigned char>(ch)) || ch == 'd' || ch == 'm' || ch == 'a' ||
               ch == '(';
    }

    LinearForm expr() {
        LinearForm r;
        bool first = true;
        while (true) {
            char ch = peek();
            int sign = 1;
            if (ch == '+' || ch == '-') {
                sign = ch == '-' ? -1 : 1;
                ++i;
            } else if (!first) {
                break;
            }
            LinearForm t = term();
            r += sign < 0 ? -t : t;
            first = false;
        }
        return r;
    }

    LinearForm term() {
        LinearForm r = factor();
        while (true) {
            char ch = peek();
            if (ch == '*') {
                ++i;
                r = mul(r, factor());
            } else if (ch == '/') {
                ++i;
                LinearForm q = factor();
                if (!q.is_constant() || q.c0() == 0) fail("division by non-constant");
                r = r * (Rational(1) / q.c0());
            } else if (starts_factor(ch)) {
                r = mul(r, factor());
            } else {
                break;
            }
        }
        return r;
    }

    LinearForm mul(const LinearForm& x, const LinearForm& y) {
        if (x.is_constant()) return y * x.c0();
        if (y.is_constant()) return x * y.c0();
        fail("nonlinear product");
    }

    LinearForm factor() {
        char ch = peek();
        if (ch == '-') {
            ++i;
            return -factor();
        }
        if (ch == '(') {
            ++i;
            LinearForm r = expr();
            if (peek() != ')') fail("missing ')'");
            ++i;
            return r;
        }
        if (ch == 'd' || ch == 'm' || ch == 'a') {
            ++i;
            return LinearForm::var(ch == 'd' ? kD : ch == 'm' ? kM : kA);
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            Rational v(mpz_class(s.substr(i, j - i)));
            i = j;
            return LinearForm::constant(v);
        }
        fail(ch ? std::string("unexpected '") + ch + "'" : "unexpected end");
    }
};

}  // namespace

LinearForm LinearForm::parse(const std::string& s) {
    FormParser p(s);
    LinearForm r = p.expr();
    if (p.peek() != '\0') p.fail("trailing input");
    return r;
}

Inequality Inequality::negated() const {
    return Inequality(-form, rel == Rel::Ge ? Rel::Gt : Rel::Ge, "not(" + provenance + ")");
}

Inequality Inequality::normalized() const {
    Inequality r = *this;
    static const int order[4] = {1, 2, 3, 0};
    for (int k : order) {
        if (form.c[k] != 0) {
            Rational s = abs(form.c[k]);
            r.form = form * (Rational(1) / s);
            break;
        }
    }
    return r;
}

bool Inequality::holds(const Rational& d, const Rational& m, const Rational& a) const {
    Rational v = form.eval(d, m, a);
    return rel == Rel::Ge ? v >= 0 : v > 0;
}

std::string Inequality::str() const {
    return form.str() + (rel == Rel::Ge ? " >= 0" : " > 0");
}

Inequality ge(const LinearForm& lhs, const LinearForm& rhs, std::string prov) {
    return Inequality(lhs - rhs, Rel::Ge, std::move(prov));
}

Inequality gt(const LinearForm& lhs, const LinearForm& rhs, std::string prov) {
    return Inequality(lhs - rhs, Rel::Gt, std::move(prov));
}

Inequality parse_inequality(const std::string& s, std::string prov) {
    static const std::pair<const char*, int> ops[] = {
        {">=", 0}, {"<=", 1}, {"≥", 0}, {"≤", 1}, {">", 2}, {"<", 3}};
    for (auto& [op, kind] : ops) {
        size_t p = s.find(op);
        if (p == std::string::npos) continue;
        LinearForm l = LinearForm::parse(s.substr(0, p));
        LinearForm r = LinearForm::parse(s.substr(p + std::string(op).size()));
        switch (kind) {
            case 0: return ge(l, r, std::move(prov));
            case 1: return ge(r, l, std::move(prov));
            case 2: return gt(l, r, std::move(prov));
            default: return gt(r, l, std::move(prov));
        }
    }
    throw std::invalid_argument("no relation in inequality: " + s);
}

bool ConstraintSet::add(const Inequality& q) {
    Inequality nq = q.normalized();
    for (auto& e : items_) {
        Inequality ne = e.normalized();
        if (ne.form != nq.form) continue;
        if (ne.rel == nq.rel) return false;
        if (nq.rel == Rel::Gt) e = q;  // strict subsumes weak
        return false;
    }
    items_.push_back(q);
    return true;
}

void ConstraintSet::add_all(const ConstraintSet& o) {
    for (auto& q : o.items_) add(q);
}

ConstraintSet ConstraintSet::closure() const {
    ConstraintSet r;
    for (auto q : items_) {
        q.rel = Rel::Ge;
        r.add(q);
    }
    return r;
}

bool ConstraintSet::holds(const Rational& d, const Rational& m, const Rational& a) const {
    for (auto& q : items_)
        if (!q.holds(d, m, a)) return false;
    return true;
}

namespace {

// keeps the tightest inequality per direction; constant true ones dropped
std::vector<Inequality> prune(const std::vector<Inequality>& in) {
    std::map<LinearForm, Inequality> best;  // key: normalized form without constant
    std::vector<Inequality> out;
    for (auto& q : in) {
        if (q.form.is_constant()) {
            bool ok = q.rel == Rel::Ge ? q.form.c0() >= 0 : q.form.c0() > 0;
            if (!ok) return {q};
            continue;
        }
        Inequality n = q.normalized();
        LinearForm dir = n.form;
        dir.c[0] = 0;
        auto it = best.find(dir);
        if (it == best.end()) {
            best.emplace(dir, n);
            continue;
        }
        Inequality& cur = it->second;
        if (n.form.c0() < cur.form.c0() ||
            (n.form.c0() == cur.form.c0() && n.rel == Rel::Gt && cur.rel == Rel::Ge))
            cur = n;
    }
    for (auto& [k, v] : best) out.push_back(v);
    return out;
}

std::vector<Inequality> fm_step(const std::vector<Inequality>& in, Var v) {
    std::vector<Inequality> pos, neg, out;
    for (auto& q : in) {
        if (q.form.c[v] > 0)
            pos.push_back(q);
        else if (q.form.c[v] < 0)
            neg.push_back(q);
        else
            out.push_back(q);
    }
    for (auto& p : pos)
        for (auto& n : neg) {
            LinearForm f = p.form * Rational(-n.form.c[v]) + n.form * p.form.c[v];
            f.c[v] = 0;
            out.emplace_back(f, (p.strict() || n.strict()) ? Rel::Gt : Rel::Ge,
                             p.provenance + " & " + n.provenance);
        }
    return prune(out);
}

bool constants_hold(const std::vector<Inequality>& v) {
    for (auto& q : v) {
        if (!q.form.is_constant()) continue;
        bool ok = q.rel == Rel::Ge ? q.form.c0() >= 0 : q.form.c0() > 0;
        if (!ok) return false;
    }
    return true;
}

}  // namespace

ConstraintSet eliminate(const ConstraintSet& cs, Var v) {
    ConstraintSet r;
    for (auto& q : fm_step(cs.items(), v)) r.add(q);
    return r;
}

bool decide_feasible(const ConstraintSet& cs) {
    std::vector<Inequality> cur = prune(cs.items());
    for (Var v : {kA, kM, kD}) {
        if (!constants_hold(cur)) return false;
        cur = fm_step(cur, v);
    }
    return constants_hold(cur);
}

bool entails(const ConstraintSet& cs, const Inequality& q) {
    ConstraintSet t = cs;
    t.add(q.negated());
    return !decide_feasible(t);
}

namespace {

Inequality substitute(const Inequality& q, Var v, const Rational& x) {
    Inequality r = q;
    r.form.c[0] += r.form.c[v] * x;
    r.form.c[v] = 0;
    return r;
}

// value of v satisfying every constraint (only v occurs), preferring small integers
std::optional<Rational> pick(const std::vector<Inequality>& qs, Var v) {
    std::optional<Rational> lo, hi;
    bool lo_strict = false, hi_strict = false;
    for (auto& q : qs) {
        const Rational& k = q.form.c[v];
        if (k == 0) {
            bool ok = q.rel == Rel::Ge ? q.form.c0() >= 0 : q.form.c0() > 0;
            if (!ok) return std::nullopt;
            continue;
        }
        Rational b = -q.form.c0() / k;
        if (k > 0) {
            if (!lo || b > *lo || (b == *lo && q.strict())) {
                lo_strict = (lo && b == *lo) ? (lo_strict || q.strict()) : q.strict();
                lo = b;
            }
        } else {
            if (!hi || b < *hi || (b == *hi && q.strict())) {
                hi_strict = (hi && b == *hi) ? (hi_strict || q.strict()) : q.strict();
                hi = b;
            }
        }
    }
    auto ok = [&](const Rational& x) {
        if (lo && (x < *lo || (lo_strict && x == *lo))) return false;
        if (hi && (x > *hi || (hi_strict && x == *hi))) return false;
        return true;
    };
    if (!lo && !hi) return Rational(0);
    if (lo && hi) {
        if (*lo > *hi) return std::nullopt;
        if (*lo == *hi) return (lo_strict || hi_strict) ? std::nullopt : std::optional(*lo);
    }
    if (ok(Rational(0))) return Rational(0);
    mpz_class base;
    if (lo) {
        mpz_fdiv_q(base.get_mpz_t(), lo->get_num_mpz_t(), lo->get_den_mpz_t());
        for (int t = 0; t < 3; ++t)
            if (ok(Rational(base + t))) return Rational(base + t);
    }
    if (hi) {
        mpz_cdiv_q(base.get_mpz_t(), hi->get_num_mpz_t(), hi->get_den_mpz_t());
        for (int t = 0; t < 3; ++t)
            if (ok(Rational(base - t))) return Rational(base - t);
    }
    if (lo && hi) return (*lo + *hi) / 2;
    return std::nullopt;
}

}  // namespace

std::optional<Witness> find_witness(const ConstraintSet& cs) {
    if (!decide_feasible(cs)) return std::nullopt;
    std::vector<Inequality> s3 = prune(cs.items());
    std::vector<Inequality> s2 = fm_step(s3, kA);
    std::vector<Inequality> s1 = fm_step(s2, kM);
    auto d = pick(s1, kD);
    if (!d) return std::nullopt;
    std::vector<Inequality> t2;
    for (auto& q : s2) t2.push_back(substitute(q, kD, *d));
    auto m = pick(t2, kM);
    if (!m) return std::nullopt;
    std::vector<Inequality> t3;
    for (auto& q : s3) t3.push_back(substitute(substitute(q, kD, *d), kM, *m));
    auto a = pick(t3, kA);
    if (!a) return std::nullopt;
    Witness w{*d, *m, *a};
    if (!cs.holds(w.d, w.m, w.a)) return std::nullopt;
    return w;
}

MuResult mu_inf(const ConstraintSet& p) {
    MuResult r;
    for (auto& q : p.items())
        if (q.form.ca() != 0) throw std::invalid_argument("mu_inf: half-plane involves a");
    ConstraintSet pos = p;
    pos.add(Inequality(LinearForm::var(kM), Rel::Gt, "m > 0"));
    if (!decide_feasible(pos)) return r;

    std::vector<Inequality> h = p.closure().items();
    h.emplace_back(LinearForm::var(kM), Rel::Ge, "m >= 0");

    auto in_cone = [&](const Rational& x, const Rational& y) {
        for (auto& q : h)
            if (q.form.cd() * x + q.form.cm() * y < 0) return false;
        return true;
    };
    auto in_region = [&](const Rational& x, const Rational& y) {
        for (auto& q : h)
            if (q.form.eval(x, y, 0) < 0) return false;
        return true;
    };

    struct Cand {
        Rational val;
        bool ray;
        Rational x, y;
    };
    std::vector<Cand> cands;
    bool minus_inf = false;

    for (auto& q : h) {
        Rational x = -q.form.cm(), y = q.form.cd();
        if (x == 0 && y == 0) continue;
        for (int s : {1, -1}) {
            Rational rx = x * s, ry = y * s;
            if (!in_cone(rx, ry)) continue;
            if (rx > 0) r.unbounded_d = true;
            if (ry > 0) r.unbounded_m = true;
            if (ry == 0 && rx < 0) minus_inf = true;
            if (ry > 0) cands.push_back({rx / ry, true, rx, ry});
        }
    }
    for (size_t i = 0; i < h.size(); ++i)
        for (size_t j = i + 1; j < h.size(); ++j) {
            const LinearForm &f = h[i].form, &g = h[j].form;
            Rational det = f.cd() * g.cm() - f.cm() * g.cd();
            if (det == 0) continue;
            Rational x = (-f.c0() * g.cm() + f.cm() * g.c0()) / det;
            Rational y = (-f.cd() * g.c0() + f.c0() * g.cd()) / det;
            if (!in_region(x, y)) continue;
            if (y > 0)
                cands.push_back({x / y, false, x, y});
            else if (x < 0)
                minus_inf = true;
        }
    if (minus_inf) {
        r.kind = MuResult::Kind::MinusInfinity;
        return r;
    }
    if (cands.empty()) return r;
    Rational best = cands[0].val;
    for (auto& c : cands) best = std::min(best, c.val);
    r.kind = MuResult::Kind::Finite;
    r.mu = best;
    ConstraintSet bind;
    for (auto& c : cands) {
        if (c.val != best) continue;
        for (auto& q : p.items()) {
            bool tight = c.ray ? (q.form.cd() * c.x + q.form.cm() * c.y == 0)
                               : (q.form.eval(c.x, c.y, 0) == 0);
            if (tight) bind.add(q);
        }
    }
    r.binding = bind.items();
    return r;
}

}  // namespace cmdeg
