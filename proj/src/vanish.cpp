#include "cmdeg/vanish.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace cmdeg {

bool Demands::demand(const Inequality& q) {
    if (q.form.is_constant()) {
        const Rational& v = q.form.c0();
        if (q.strict() ? v > 0 : v >= 0) return true;
        if (collect_) throw VanishFailure("demand is false: " + q.str(), {q});
        missing_.push_back(q);
        return false;
    }
    if (entails(context_, q)) {
        required_.add(q);
        return true;
    }
    if (collect_) {
        ConstraintSet t = context_;
        t.add(q);
        if (!decide_feasible(t)) throw VanishFailure("demand contradicts the accumulated region: " + q.str(), {q});
        context_.add(q);
        required_.add(q);
        return true;
    }
    missing_.push_back(q);
    return false;
}

namespace {

void require(Demands& dm, const Inequality& q, const std::string& what) {
    if (!dm.demand(q)) throw VanishFailure(what + ": " + q.str() + " not entailed", {q});
}

LinearForm zero_form() { return LinearForm(); }

}  // namespace

std::vector<Inequality> standard_conditions(const DivisorClass& L, const Configuration& c,
                                            const std::vector<size_t>& order) {
    if (L.base.kind != SurfaceKind::P2) throw std::invalid_argument("standardness is defined on P2 blow-ups");
    if (L.mults.size() != c.size()) throw std::invalid_argument("class does not live on configuration");
    std::vector<Inequality> out;
    std::set<std::string> seen;
    auto push = [&](const LinearForm& f, const std::string& why) {
        Inequality q(f, Rel::Ge, why);
        std::string key = q.normalized().str();
        if (f.is_constant() && f.c0() >= 0) return;
        if (seen.insert(key).second) out.push_back(q);
    };
    push(L.d0, "degree nonnegative");
    for (size_t i = 0; i < c.size(); ++i) {
        push(L.mults[i], "multiplicity nonnegative");
        if (c.points[i].parent) {
            int p = c.index_of(*c.points[i].parent);
            push(L.mults[p] - L.mults[i], "proximity");
        }
    }
    if (!order.empty()) {
        if (order.size() != c.size()) throw std::invalid_argument("declared order must list every point");
        std::vector<bool> placed(c.size(), false);
        for (size_t t = 0; t < order.size(); ++t) {
            size_t i = order[t];
            if (i >= c.size() || placed[i]) throw std::invalid_argument("declared order is not a permutation");
            if (c.points[i].parent && !placed[c.index_of(*c.points[i].parent)])
                throw std::invalid_argument("declared order is not admissible");
            placed[i] = true;
            if (t + 1 < order.size()) push(L.mults[i] - L.mults[order[t + 1]], "declared order");
        }
        LinearForm top = L.d0;
        for (size_t t = 0; t < std::min<size_t>(3, order.size()); ++t) top -= L.mults[order[t]];
        push(top, "degree dominates top triple");
        return out;
    }
    // every triple, enumerated over distinct multiplicity forms
    std::map<LinearForm, int> count;
    for (auto& m : L.mults) ++count[m];
    std::vector<std::pair<LinearForm, int>> forms(count.begin(), count.end());
    size_t nf = forms.size();
    size_t take = std::min<size_t>(3, L.mults.size());
    std::vector<int> used(nf, 0);
    std::function<void(size_t, size_t, LinearForm)> rec = [&](size_t start, size_t left, LinearForm acc) {
        if (left == 0) {
            push(acc, "degree dominates triple");
            return;
        }
        for (size_t f = start; f < nf; ++f) {
            if (used[f] >= forms[f].second) continue;
            ++used[f];
            rec(f, left - 1, acc - forms[f].first);
            --used[f];
        }
    };
    rec(0, take, L.d0);
    return out;
}

StandardResult is_standard(const DivisorClass& L, const Configuration& c, const ConstraintSet& cs,
                           const std::vector<size_t>& order) {
    StandardResult r;
    if (!decide_feasible(cs)) {
        r.verdict = StdVerdict::Undecidable;
        return r;
    }
    bool no = false;
    for (auto& q : standard_conditions(L, c, order)) {
        if (entails(cs, q)) {
            r.used.add(q);
        } else {
            if (entails(cs, q.negated())) no = true;
            r.missing.push_back(q);
        }
    }
    r.verdict = no ? StdVerdict::No : (r.missing.empty() ? StdVerdict::Yes : StdVerdict::Undecidable);
    return r;
}

StandardResult is_standard(const DivisorClass& L, const ConstraintSet& cs) {
    Configuration c{L.base, {}, {}};
    for (size_t i = 0; i < L.mults.size(); ++i) c.points.push_back({"p" + std::to_string(i + 1)});
    return is_standard(L, c, cs);
}

std::optional<std::vector<Rational>> standard_decomposition(const DivisorClass& L) {
    if (!L.is_constant() || L.base.kind != SurfaceKind::P2) throw std::invalid_argument("needs a constant P2 class");
    std::vector<Rational> m;
    for (auto& f : L.mults) m.push_back(f.c0());
    for (size_t i = 0; i + 1 < m.size(); ++i)
        if (m[i] < m[i + 1]) throw std::invalid_argument("multiplicities must be sorted descending");
    Rational top = 0;
    for (size_t i = 0; i < std::min<size_t>(3, m.size()); ++i) top += m[i];
    std::vector<Rational> coeffs{L.d0.c0() - top};
    for (size_t i = 0; i < m.size(); ++i) coeffs.push_back(m[i] - (i + 1 < m.size() ? m[i + 1] : Rational(0)));
    for (auto& x : coeffs)
        if (x < 0) return std::nullopt;
    return coeffs;
}

bool auto_anticanonical(const Configuration& c) {
    if (c.base.kind != SurfaceKind::P2 || c.size() > 8) return false;
    for (auto& p : c.points)
        if (p.parent || p.tag != "general") return false;
    return true;
}

HarbourneResult harbourne_check(const VanishingGoal& g, Demands& dm, const std::string& anticanonical) {
    HarbourneResult r;
    const DivisorClass& L = g.bundle;
    if (L.base.kind != SurfaceKind::P2) {
        r.reason = "Harbourne's criterion needs a P2 blow-up";
        return r;
    }
    if (L.is_zero()) {
        r.certified = true;
        r.reason = "trivial bundle";
        return r;
    }
    if (anticanonical.empty() && !auto_anticanonical(g.surface)) {
        r.reason = "surface not known to be strongly anticanonical";
        return r;
    }
    std::vector<Inequality> need = standard_conditions(L, g.surface);
    need.push_back(Inequality(-intersect(L, canonical(g.surface)), Rel::Gt, "-(L.K) > 0"));
    std::vector<Inequality> missing;
    for (auto& q : need) {
        if (dm.demand(q))
            r.used.add(q);
        else
            missing.push_back(q);
    }
    if (!missing.empty()) {
        r.reason = "not entailed:";
        for (auto& q : missing) r.reason += " " + q.str() + ";";
        return r;
    }
    r.certified = true;
    r.reason = anticanonical.empty() ? "standard, at most 8 general points" : "standard, " + anticanonical;
    return r;
}

HarbourneResult harbourne_check(const VanishingGoal& g, const std::string& anticanonical) {
    Demands dm(g.context);
    return harbourne_check(g, dm, anticanonical);
}

VanishingGoal reduce_by_curve(const VanishingGoal& g, const std::vector<DivisorClass>& comps,
                              const LinearForm& N, Demands& dm) {
    if (comps.empty()) throw std::invalid_argument("reduce_by_curve needs at least one component");
    if (N.is_constant()) {
        if (N.c0() < 0 || N.c0().get_den() != 1) throw std::invalid_argument("step count must be a nonnegative integer");
        if (N.c0() == 0) return g;
    } else {
        require(dm, Inequality(N, Rel::Ge, "step count nonnegative"), "reduce_by_curve");
    }
    DivisorClass C = comps[0];
    for (size_t i = 1; i < comps.size(); ++i) C = C + comps[i];
    if (!C.is_constant()) throw std::invalid_argument("curve classes must be constant");
    g.bundle.check_compatible(C);
    DivisorClass KC = canonical(g.surface) + C;
    for (auto& Ci : comps) {
        LinearForm base = intersect(g.bundle, Ci);
        Rational cc = intersect(C, Ci).c0();
        Rational kap = intersect(KC, Ci).c0();
        // (F - sC).Ci - (K+C).Ci > 0 at s = 0 and s = N-1
        require(dm, Inequality(base - LinearForm::constant(kap), Rel::Gt, "curve criterion s=0"), "reduce_by_curve");
        LinearForm last = base - (N - LinearForm::constant(1)) * cc - LinearForm::constant(kap);
        require(dm, Inequality(last, Rel::Gt, "curve criterion s=N-1"), "reduce_by_curve");
    }
    VanishingGoal out = g;
    out.bundle = g.bundle - C.scaled(N);
    return out;
}

namespace {

VanishingGoal drop_point(const VanishingGoal& g, const std::string& point, const Rational& expect, const char* op) {
    int i = g.surface.index_of(point);
    if (i < 0) throw std::invalid_argument(std::string(op) + ": no point " + point);
    if (g.surface.has_children(point)) throw std::invalid_argument(std::string(op) + ": point " + point + " has children");
    const LinearForm& m = g.bundle.mults[i];
    if (!m.is_constant() || m.c0() != expect)
        throw std::invalid_argument(std::string(op) + ": multiplicity at " + point + " is " + m.str() +
                                    ", expected " + rat_str(expect));
    VanishingGoal out = g;
    out.surface.points.erase(out.surface.points.begin() + i);
    for (auto& p : out.surface.points)
        if (p.directed_to == point) p.directed_to.reset();
    out.bundle.mults.erase(out.bundle.mults.begin() + i);
    return out;
}

}  // namespace

VanishingGoal negexc_twist(const VanishingGoal& g, const std::string& point) {
    return drop_point(g, point, Rational(-1), "negexc_twist");
}

VanishingGoal forget_point(const VanishingGoal& g, const std::string& point) {
    return drop_point(g, point, Rational(0), "forget");
}

VanishingGoal forget_zeros(const VanishingGoal& g) {
    VanishingGoal cur = g;
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = cur.surface.size(); i-- > 0;) {
            const auto& m = cur.bundle.mults[i];
            if (m.is_zero() && !cur.surface.has_children(cur.surface.points[i].id)) {
                cur = forget_point(cur, cur.surface.points[i].id);
                changed = true;
            }
        }
    }
    return cur;
}

bool pullback_vanishing(const VanishingGoal& g) {
    if (g.bundle.base.kind != SurfaceKind::P2) return false;
    for (auto& m : g.bundle.mults)
        if (!m.is_zero()) return false;
    return true;
}

bool hirzebruch_vanishing(const VanishingGoal& g, Demands& dm) {
    const DivisorClass& L = g.bundle;
    if (L.base.kind != SurfaceKind::Hirzebruch) return false;
    for (auto& m : L.mults)
        if (!m.is_zero()) return false;
    const LinearForm &x = L.d0, &y = L.d1;
    auto minus_one = [](const LinearForm& f) { return f.is_constant() && f.c0() == -1; };
    if (minus_one(x)) return true;
    if (L.base.k == 0) {
        // Kunneth on P1 x P1
        if (minus_one(y)) return true;
        bool ok = dm.demand(Inequality(x + LinearForm::constant(1), Rel::Ge, "Kunneth"));
        ok = dm.demand(Inequality(y + LinearForm::constant(1), Rel::Ge, "Kunneth")) && ok;
        return ok;
    }
    // push forward to P1: sum of O(y - ik), i = 0..x
    bool ok = dm.demand(Inequality(x, Rel::Ge, "pushforward"));
    ok = dm.demand(Inequality(y - x * Rational(L.base.k) + LinearForm::constant(1), Rel::Ge, "pushforward")) && ok;
    return ok;
}

std::vector<Specialty> detect_specialty(const DivisorClass& L, const std::vector<DivisorClass>& candidates,
                                        const ConstraintSet& cs, bool require_entailed) {
    std::vector<Specialty> out;
    for (auto& E : candidates) {
        if (is_minus_one_curve(E) != Tri::Yes) continue;
        LinearForm v = intersect(L, E);
        Inequality cond(-v - LinearForm::constant(2), Rel::Ge, "L.E <= -2");
        bool hit;
        if (require_entailed) {
            hit = entails(cs, cond);
        } else {
            ConstraintSet t = cs;
            t.add(cond);
            hit = decide_feasible(t);
        }
        if (hit) out.push_back({E, v, cond});
    }
    return out;
}

namespace {

std::string point_at(const Configuration& c, int pos) {
    if (pos < 1 || static_cast<size_t>(pos) > c.size())
        throw std::invalid_argument("point position " + std::to_string(pos) + " out of range");
    return c.points[pos - 1].id;
}

std::string positions_str(const std::vector<int>& p) {
    std::string s;
    for (size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + (p[i] ? std::to_string(p[i]) : std::string("-"));
    return s;
}

}  // namespace

VanishingCertificate run_script(const VanishingGoal& g0, const std::vector<ScriptStep>& script, Demands& dm) {
    VanishingCertificate cert;
    cert.start = g0;
    VanishingGoal g = g0;
    auto log = [&](const std::string& what) {
        std::string line = what + ": " + print_class(g.bundle, &g.surface);
        g.trace.push_back(line);
        cert.steps.push_back(line);
    };
    using K = ScriptStep::Kind;
    for (size_t si = 0; si < script.size(); ++si) {
        const ScriptStep& st = script[si];
        if (!cert.terminal.empty()) throw std::invalid_argument("steps after a terminal step");
        switch (st.kind) {
            case K::Cremona: {
                if (st.points.size() != 3) throw std::invalid_argument("cremona step needs 3 points");
                CremonaMove mv;
                for (int t = 0; t < 3; ++t) mv.base_points[t] = point_at(g.surface, st.points[t]);
                mv.kase = st.kase ? *st.kase : classify(g.surface, mv.base_points);
                std::vector<DivisorClass> cls{g.bundle};
                apply_move(g.surface, cls, mv);
                g.bundle = cls[0];
                log("cremona(" + positions_str(st.points) + ")");
                break;
            }
            case K::Rule: {
                if (st.points.size() != 5) throw std::invalid_argument("rule step needs 5 anchors");
                std::array<std::optional<std::string>, 5> anchors;
                for (int t = 0; t < 5; ++t)
                    if (st.points[t]) anchors[t] = point_at(g.surface, st.points[t]);
                std::vector<DivisorClass> cls{g.bundle};
                apply_rule(g.surface, cls, st.rule, anchors);
                g.bundle = cls[0];
                std::string name = st.rule == Rule::I ? "I" : st.rule == Rule::II ? "II" : "III";
                log("rule " + name + "(" + positions_str(st.points) + ")");
                break;
            }
            case K::Forget: {
                std::vector<std::string> ids;
                for (int p : st.points) ids.push_back(point_at(g.surface, p));
                for (auto& id : ids) g = forget_point(g, id);
                log("forget(" + positions_str(st.points) + ")");
                break;
            }
            case K::ForgetZeros:
                g = forget_zeros(g);
                log("forget zeros");
                break;
            case K::NegExc: {
                std::vector<std::string> ids;
                for (int p : st.points) ids.push_back(point_at(g.surface, p));
                for (auto& id : ids) g = negexc_twist(g, id);
                log("negexc(" + positions_str(st.points) + ")");
                break;
            }
            case K::Reduce: {
                std::vector<DivisorClass> comps;
                for (auto& t : st.curves) comps.push_back(parse_class(t).cls);
                LinearForm N = LinearForm::parse(st.steps);
                g = reduce_by_curve(g, comps, N, dm);
                log("reduce x" + N.str());
                break;
            }
            case K::Expect: {
                DivisorClass want = parse_class(st.text).cls;
                if (want != g.bundle)
                    throw VanishFailure("checkpoint mismatch: expected " + st.text + ", have " +
                                        print_class(g.bundle, &g.surface));
                break;
            }
            case K::Harbourne: {
                HarbourneResult h = harbourne_check(g, dm, st.text);
                if (!h.certified) throw VanishFailure("Harbourne's criterion fails: " + h.reason, dm.missing());
                cert.terminal = "harbourne";
                log("harbourne (" + h.reason + ")");
                break;
            }
            case K::Pullback:
                if (!pullback_vanishing(g)) throw VanishFailure("pullback step needs all multiplicities zero on P2");
                cert.terminal = "pullback";
                log("pullback");
                break;
            case K::Hirzebruch:
                if (!hirzebruch_vanishing(g, dm))
                    throw VanishFailure("Hirzebruch vanishing does not apply", dm.missing());
                cert.terminal = "hirzebruch";
                log("hirzebruch");
                break;
        }
    }
    if (cert.terminal.empty()) throw VanishFailure("script ends without a terminal step");
    cert.final_goal = g;
    cert.required = dm.required();
    return cert;
}

}  // namespace cmdeg
