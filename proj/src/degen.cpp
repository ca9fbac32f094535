#include "cmdeg/degen.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cmdeg {

int CentralFiber::index_of(const std::string& id) const {
    for (size_t i = 0; i < components.size(); ++i)
        if (components[i].id == id) return static_cast<int>(i);
    return -1;
}

const Component& CentralFiber::component(const std::string& id) const {
    int i = index_of(id);
    if (i < 0) throw std::invalid_argument("unknown component " + id);
    return components[i];
}

Component& CentralFiber::component(const std::string& id) {
    int i = index_of(id);
    if (i < 0) throw std::invalid_argument("unknown component " + id);
    return components[i];
}

bool CentralFiber::adjacent(const std::string& x, const std::string& y) const {
    for (auto& e : adjacencies)
        if ((e.a == x && e.b == y) || (e.a == y && e.b == x)) return true;
    return false;
}

std::vector<std::string> CentralFiber::neighbors(const std::string& id) const {
    std::vector<std::string> out;
    for (auto& e : adjacencies) {
        if (e.a == id) out.push_back(e.b);
        if (e.b == id) out.push_back(e.a);
    }
    return out;
}

std::vector<DivisorClass> CentralFiber::curves_on(const std::string& x, const std::string& y) const {
    for (auto& e : adjacencies) {
        if (e.a == x && e.b == y) return e.curve_on_a;
        if (e.b == x && e.a == y) return e.curve_on_b;
    }
    return {};
}

DivisorClass CentralFiber::self_class_of(const std::string& x, const std::string& y) const {
    const Component& c = component(x);
    if (x == y) return c.self;
    DivisorClass s = DivisorClass::zero(c.restriction.base, c.surface.size());
    for (auto& k : curves_on(x, y)) s = s + k;
    return s;
}

namespace {

LinearForm K(long v) { return LinearForm::constant(v); }

std::vector<LinearForm> fill(size_t n, const LinearForm& v) { return std::vector<LinearForm>(n, v); }

Configuration general_p2(const std::string& prefix, size_t n) {
    Configuration c{BaseSurface::p2(), {}, {}};
    for (size_t i = 0; i < n; ++i) c.points.push_back({prefix + std::to_string(i + 1)});
    return c;
}

}  // namespace

CentralFiber initial_fiber(const std::string& split) {
    if (split != "4+6") throw std::invalid_argument("only the 4+6 split is supported");
    CentralFiber f;
    LinearForm d = LinearForm::var(kD), m = LinearForm::var(kM), a = LinearForm::var(kA);
    LinearForm top = m * Rational(2) + a;
    Component P{"P1", general_p2("p", 4), DivisorClass::p2(top, fill(4, m)), {}, {}};
    P.self = DivisorClass::p2(K(-1), fill(4, {}));
    std::vector<LinearForm> fm{top};
    for (int i = 0; i < 6; ++i) fm.push_back(m);
    Component F{"F1", general_p2("q", 7), DivisorClass::p2(d, fm), {}, {}};
    std::vector<LinearForm> sm(7);
    sm[0] = K(1);
    F.self = DivisorClass::p2({}, sm);
    P.weight = {{"P1", 1}, {"F1", 1}};
    F.weight = {{"P1", 1}, {"F1", 1}};
    f.components = {P, F};
    std::vector<LinearForm> e1(7);
    e1[0] = K(-1);
    f.adjacencies.push_back({"P1", "F1", {DivisorClass::p2(K(1), fill(4, {}))}, {DivisorClass::p2({}, e1)}});
    f.ambient = {ge(d, {}, "ambient"), ge(m, {}, "ambient"), ge(a, {}, "ambient")};
    f.history.push_back("init 4+6");
    return f;
}

NormalBundle three_point(const CentralFiber& f, const std::string& comp, const DivisorClass& C) {
    const Component& V = f.component(comp);
    V.restriction.check_compatible(C);
    if (is_minus_one_curve(C) != Tri::Yes) throw std::invalid_argument("three_point needs a (-1)-curve");
    LinearForm s;
    for (auto& nb : f.neighbors(comp))
        for (auto& k : f.curves_on(comp, nb)) s += intersect(C, k);
    return {-1, -s};
}

CentralFiber modify_bundle(const CentralFiber& f, const std::string& comp, const LinearForm& coeff) {
    f.component(comp);
    CentralFiber g = f;
    g.history.push_back("modify " + comp + " by " + coeff.str());
    if (coeff.is_zero()) return g;
    for (auto& V : g.components) {
        if (V.id != comp && !f.adjacent(V.id, comp)) continue;
        DivisorClass s = f.self_class_of(V.id, comp);
        if (!s.is_constant()) throw std::invalid_argument("self class data must be constant");
        V.restriction = V.restriction + s.scaled(coeff);
    }
    return g;
}

namespace {

// xE + yF on T with Hirzebruch index h; h = 1 is carried as P2 blown up in one point
DivisorClass fclass(const Component& T, const LinearForm& x, const LinearForm& y) {
    size_t n = T.surface.size();
    if (T.surface.base.kind == SurfaceKind::P2) {
        DivisorClass c = DivisorClass::p2(y, std::vector<LinearForm>(n));
        c.mults[0] = y - x;
        return c;
    }
    return DivisorClass::fk(T.surface.base.k, x, y, std::vector<LinearForm>(n));
}

void extend(DivisorClass& c, size_t extra) {
    for (size_t i = 0; i < extra; ++i) c.mults.push_back(LinearForm());
}

Adjacency& adjacency(CentralFiber& f, const std::string& x, const std::string& y, bool& x_is_a) {
    for (auto& e : f.adjacencies) {
        if (e.a == x && e.b == y) { x_is_a = true; return e; }
        if (e.b == x && e.a == y) { x_is_a = false; return e; }
    }
    f.adjacencies.push_back({x, y, {}, {}});
    x_is_a = true;
    return f.adjacencies.back();
}

void add_piece(CentralFiber& f, const std::string& x, const std::string& y, const DivisorClass& on_x,
               const DivisorClass& on_y) {
    bool xa;
    Adjacency& e = adjacency(f, x, y, xa);
    (xa ? e.curve_on_a : e.curve_on_b).push_back(on_x);
    (xa ? e.curve_on_b : e.curve_on_a).push_back(on_y);
}

// every class living on component id gains `extra` trailing zero multiplicities
void extend_component(CentralFiber& f, const std::string& id, size_t extra) {
    Component& W = f.component(id);
    extend(W.restriction, extra);
    extend(W.self, extra);
    for (auto& e : f.adjacencies) {
        if (e.a == id) for (auto& c : e.curve_on_a) extend(c, extra);
        if (e.b == id) for (auto& c : e.curve_on_b) extend(c, extra);
    }
}

std::vector<DivisorClass*> classes_on(CentralFiber& f, const std::string& id) {
    Component& W = f.component(id);
    std::vector<DivisorClass*> out{&W.restriction, &W.self};
    for (auto& e : f.adjacencies) {
        if (e.a == id) for (auto& c : e.curve_on_a) out.push_back(&c);
        if (e.b == id) for (auto& c : e.curve_on_b) out.push_back(&c);
    }
    return out;
}

mpz_class lcm(const mpz_class& x, const mpz_class& y) {
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return r;
}

void throw_one(CentralFiber& g, const ThrowSpec& sp) {
    const int n = sp.n;
    if (n < 1) throw std::invalid_argument("throw needs n >= 1");
    if (sp.transversality.empty()) throw std::invalid_argument("throw of a curve on " + sp.component + ": transversality not asserted");
    if (static_cast<int>(sp.names.size()) != n) throw std::invalid_argument("throw needs one name per new component");
    for (auto& nm : sp.names)
        if (g.index_of(nm) >= 0) throw std::invalid_argument("component " + nm + " already exists");
    const DivisorClass C = sp.curve;
    {
        const Component& V = g.component(sp.component);
        V.restriction.check_compatible(C);
        if (!C.is_constant()) throw std::invalid_argument("thrown curve must be a constant class");
    }
    if (is_minus_one_curve(C) != Tri::Yes) throw std::invalid_argument("thrown curve is not a (-1)-curve");
    for (auto& nb : g.neighbors(sp.component))
        for (auto& k : g.curves_on(sp.component, nb))
            if (k == C) throw std::invalid_argument("thrown curve lies in another component");

    const LinearForm l = -intersect(g.component(sp.component).restriction, C);
    std::vector<LinearForm> a(n + 1);  // a[0] = 0
    if (sp.a.empty()) {
        for (int k = 1; k <= n; ++k) a[k] = (-l) * frac(k, n);
    } else {
        if (static_cast<int>(sp.a.size()) != n) throw std::invalid_argument("throw needs n coefficients");
        for (int k = 1; k <= n; ++k) a[k] = sp.a[k - 1];
        if (a[n] != -l) throw std::invalid_argument("a_n must equal " + (-l).str() + " (trivial on the curve), got " + a[n].str());
    }
    for (int k = 1; k <= n; ++k) g.throw_denominators = lcm(g.throw_denominators, a[k].denominator_lcm());

    // intersection counts must match the listed points
    std::vector<ThrowPoint> points = sp.points;
    std::map<std::pair<std::string, size_t>, long> listed;
    for (auto& p : points) {
        if (p.curve != ThrowPoint::kAuto) ++listed[{p.neighbor, p.curve}];
    }
    for (auto& p : points) {
        if (p.curve != ThrowPoint::kAuto) continue;
        auto curves = g.curves_on(sp.component, p.neighbor);
        for (size_t c = 0; c < curves.size(); ++c) {
            LinearForm v = intersect(C, curves[c]);
            if (v.is_constant() && v.c0() > listed[{p.neighbor, c}]) {
                p.curve = c;
                break;
            }
        }
        if (p.curve == ThrowPoint::kAuto) throw std::invalid_argument("no curve towards " + p.neighbor + " meets the thrown curve");
        ++listed[{p.neighbor, p.curve}];
    }
    for (auto& p : points) {
        auto curves = g.curves_on(sp.component, p.neighbor);
        if (p.curve >= curves.size())
            throw std::invalid_argument("no curve " + std::to_string(p.curve) + " between " + sp.component + " and " + p.neighbor);
    }
    long total = 0;
    for (auto& nb : g.neighbors(sp.component)) {
        auto curves = g.curves_on(sp.component, nb);
        for (size_t c = 0; c < curves.size(); ++c) {
            LinearForm v = intersect(C, curves[c]);
            if (!v.is_constant() || v.c0() < 0 || v.c0().get_den() != 1)
                throw std::invalid_argument("intersection with " + nb + " is not a nonnegative integer");
            long cnt = v.c0().get_num().get_si();
            auto it = listed.find({nb, c});
            long have = it == listed.end() ? 0 : it->second;
            if (have != cnt)
                throw std::invalid_argument("curve meets " + nb + " curve " + std::to_string(c) + " in " +
                                            std::to_string(cnt) + " points, " + std::to_string(have) + " listed");
            total += cnt;
        }
    }
    if (total != n) throw std::invalid_argument("n must equal the number of intersection points (" + std::to_string(total) + ")");

    // new components
    std::vector<Component> T(n + 1);
    for (int k = 1; k <= n; ++k) {
        Component& t = T[k];
        t.id = sp.names[k - 1];
        int h = k < n ? n - k : 0;
        if (h == 1) {
            t.surface = Configuration{BaseSurface::p2(), {{t.id + ".q"}}, {}};
        } else {
            t.surface = Configuration{BaseSurface::hirzebruch(h), {}, {}};
        }
        LinearForm x, y;
        if (k < n) {
            x = a[k + 1] - a[k] * Rational(2) + a[k - 1];
            y = -l - a[k] * Rational(n - k + 1) + a[k - 1] * Rational(n - k);
            t.self = fclass(t, K(-2), K(-(n - k + 1)));
        } else {
            x = -l - a[n];
            y = a[n - 1] - a[n];
            t.self = fclass(t, K(-1), K(-1));
        }
        t.restriction = fclass(t, x, y);
        if (k > 1) t.weight[sp.names[k - 2]] = k - 1;
        t.weight[t.id] = k;
        if (k < n) t.weight[sp.names[k]] = k + 1;
        for (auto& p : points) t.weight[p.neighbor] = 1;
        if (k == n) t.weight[sp.component] = 1;
    }
    for (int k = 1; k <= n; ++k) g.components.push_back(T[k]);
    for (int k = 1; k < n; ++k) {
        DivisorClass on_next = k + 1 < n ? fclass(T[k + 1], K(1), K(n - k - 1)) : fclass(T[k + 1], K(0), K(1));
        add_piece(g, T[k].id, T[k + 1].id, fclass(T[k], K(1), K(0)), on_next);
    }

    // neighbours: a chain of n infinitely near points over each intersection point
    for (size_t j = 0; j < points.size(); ++j) {
        const ThrowPoint& p = points[j];
        if (p.neighbor == sp.component) throw std::invalid_argument("throw point on the throwing component");
        size_t base = g.component(p.neighbor).surface.size();
        extend_component(g, p.neighbor, n);
        Component& W = g.component(p.neighbor);
        for (int k = 1; k <= n; ++k) {
            PointNode pt{sp.names[k - 1] + "#" + std::to_string(j + 1)};
            if (k > 1) pt.parent = W.surface.points.back().id;
            if (k == 2 && p.directed_to) pt.directed_to = p.directed_to;
            if (k == 1 && !p.tag.empty()) pt.tag = p.tag;
            W.surface.points.push_back(pt);
            W.restriction.mults[base + k - 1] = a[k - 1] - a[k];
        }
        auto wi = W.weight.find(sp.component);
        if (wi == W.weight.end()) throw std::invalid_argument("missing weight of " + sp.component + " on " + p.neighbor);
        for (int k = 1; k <= n; ++k) W.weight[sp.names[k - 1]] = wi->second * k;
        // the old intersection curve now passes through the chain
        bool xa;
        Adjacency& e = adjacency(g, p.neighbor, sp.component, xa);
        DivisorClass& old = (xa ? e.curve_on_a : e.curve_on_b)[p.curve];
        for (int k = 1; k <= n; ++k) old.mults[base + k - 1] += K(1);
        for (int k = 1; k <= n; ++k) {
            const Component& Wc = g.component(p.neighbor);
            DivisorClass on_w = DivisorClass::zero(Wc.restriction.base, Wc.surface.size());
            on_w.mults[base + k - 1] = K(-1);
            if (k < n) on_w.mults[base + k] = K(1);
            const Component& Tk = g.component(sp.names[k - 1]);
            DivisorClass on_t = k < n ? fclass(Tk, K(0), K(1)) : fclass(Tk, K(1), K(0));
            add_piece(g, p.neighbor, sp.names[k - 1], on_w, on_t);
        }
    }

    Component& V = g.component(sp.component);
    V.restriction = V.restriction + C.scaled(a[n]);
    V.self = V.self - C * Rational(n);
    V.weight[sp.names[n - 1]] = V.weight.at(sp.component) * n;
    add_piece(g, sp.component, sp.names[n - 1], C, fclass(g.component(sp.names[n - 1]), K(0), K(1)));

    LinearForm triv = intersect(g.component(sp.component).restriction, C);
    if (!triv.is_zero()) throw std::logic_error("thrown curve not trivial after throw: " + triv.str());
}

}  // namespace

CentralFiber throw_curves(const CentralFiber& f, const std::vector<ThrowSpec>& specs) {
    for (size_t i = 0; i < specs.size(); ++i)
        for (size_t j = i + 1; j < specs.size(); ++j)
            if (specs[i].component == specs[j].component) {
                LinearForm v = intersect(specs[i].curve, specs[j].curve);
                if (!v.is_zero()) throw std::invalid_argument("simultaneous throws must be pairwise disjoint");
            }
    CentralFiber g = f;
    std::string h = "throw";
    for (auto& sp : specs) {
        throw_one(g, sp);
        h += " " + sp.component + ":" + sp.names.back();
    }
    auto bad = check_invariants(g);
    if (!bad.empty()) throw std::logic_error("invariant violated after throw: " + bad.front());
    g.history.push_back(h);
    return g;
}

namespace {

template <typename Fn>
CentralFiber transform_component(const CentralFiber& f, const std::string& comp, Fn&& fn, const std::string& label) {
    CentralFiber g = f;
    auto ptrs = classes_on(g, comp);
    std::vector<DivisorClass> cls;
    for (auto* p : ptrs) cls.push_back(*p);
    Component& V = g.component(comp);
    fn(V.surface, cls);
    for (size_t i = 0; i < ptrs.size(); ++i) *ptrs[i] = cls[i];
    g.history.push_back(label);
    return g;
}

}  // namespace

CentralFiber cremona_component(const CentralFiber& f, const std::string& comp, const CremonaMove& mv) {
    return transform_component(
        f, comp, [&](Configuration& c, std::vector<DivisorClass>& cls) { apply_move(c, cls, mv); },
        "cremona " + comp + " (" + mv.base_points[0] + "," + mv.base_points[1] + "," + mv.base_points[2] + ")");
}

CentralFiber rule_component(const CentralFiber& f, const std::string& comp, Rule r,
                            const std::array<std::optional<std::string>, 5>& anchors) {
    std::string label = std::string("rule ") + (r == Rule::I ? "I" : r == Rule::II ? "II" : "III") + " " + comp;
    return transform_component(
        f, comp, [&](Configuration& c, std::vector<DivisorClass>& cls) { apply_rule(c, cls, r, anchors); }, label);
}

CentralFiber rename_components(const CentralFiber& f, const std::map<std::string, std::string>& names) {
    auto map = [&](const std::string& s) {
        auto it = names.find(s);
        return it == names.end() ? s : it->second;
    };
    std::set<std::string> ids;
    for (auto& V : f.components)
        if (!ids.insert(map(V.id)).second) throw std::invalid_argument("rename produces duplicate id " + map(V.id));
    for (auto& [from, to] : names) f.component(from);
    CentralFiber g = f;
    for (auto& V : g.components) {
        V.id = map(V.id);
        std::map<std::string, Rational> w;
        for (auto& [k, v] : V.weight) w[map(k)] = v;
        V.weight = w;
    }
    for (auto& e : g.adjacencies) {
        e.a = map(e.a);
        e.b = map(e.b);
    }
    std::string h = "rename";
    for (auto& [from, to] : names) h += " " + from + "->" + to;
    g.history.push_back(h);
    return g;
}

std::vector<BadCurve> find_bad_curves(const CentralFiber& f, const ConstraintSet& extra) {
    ConstraintSet cs = f.ambient;
    cs.add_all(extra);
    std::vector<BadCurve> out;
    for (auto& V : f.components) {
        const Configuration& c = V.surface;
        const BaseSurface& b = V.restriction.base;
        size_t n = c.size();
        std::vector<DivisorClass> cand;
        auto push = [&](const DivisorClass& x) {
            if (std::find(cand.begin(), cand.end(), x) == cand.end()) cand.push_back(x);
        };
        std::vector<size_t> roots;
        for (size_t i = 0; i < n; ++i) {
            if (!c.has_children(c.points[i].id)) push(DivisorClass::exceptional(b, n, i));
            if (!c.points[i].parent) roots.push_back(i);
        }
        if (b.kind == SurfaceKind::P2) {
            for (size_t x = 0; x < roots.size(); ++x)
                for (size_t y = x + 1; y < roots.size(); ++y) {
                    DivisorClass line = DivisorClass::p2(K(1), std::vector<LinearForm>(n));
                    line.mults[roots[x]] = line.mults[roots[y]] = K(1);
                    push(line);
                }
        } else {
            for (size_t r : roots) {
                DivisorClass fib = DivisorClass::fk(b.k, {}, K(1), std::vector<LinearForm>(n));
                fib.mults[r] = K(1);
                push(fib);
                if (b.k == 0) {
                    DivisorClass sec = DivisorClass::fk(0, K(1), {}, std::vector<LinearForm>(n));
                    sec.mults[r] = K(1);
                    push(sec);
                }
            }
        }
        for (auto& s : detect_specialty(V.restriction, cand, cs, false))
            out.push_back({V.id, s.curve, s.value, s.condition});
    }
    return out;
}

std::vector<std::string> check_sigma(const CentralFiber& f) {
    std::vector<std::string> bad;
    for (auto& V : f.components) {
        DivisorClass s = DivisorClass::zero(V.restriction.base, V.surface.size());
        for (auto& nb : f.neighbors(V.id))
            if (!V.weight.count(nb)) bad.push_back(V.id + ": no weight for neighbour " + nb);
        for (auto& [w, mult] : V.weight) {
            if (w != V.id && !f.adjacent(V.id, w)) continue;
            s = s + f.self_class_of(V.id, w) * mult;
        }
        if (!s.is_zero()) bad.push_back(V.id + ": sum of weighted self classes is " + print_class(s, &V.surface));
    }
    return bad;
}

std::vector<std::string> check_degree_matching(const CentralFiber& f) {
    std::vector<std::string> bad;
    for (auto& e : f.adjacencies) {
        if (e.curve_on_a.empty() || e.curve_on_a.size() != e.curve_on_b.size()) {
            bad.push_back(e.a + "-" + e.b + ": curve lists malformed");
            continue;
        }
        const Component &A = f.component(e.a), &B = f.component(e.b);
        for (size_t i = 0; i < e.curve_on_a.size(); ++i) {
            LinearForm x = intersect(A.restriction, e.curve_on_a[i]);
            LinearForm y = intersect(B.restriction, e.curve_on_b[i]);
            if (x != y)
                bad.push_back(e.a + "-" + e.b + " piece " + std::to_string(i) + ": degrees " + x.str() + " vs " + y.str());
        }
    }
    return bad;
}

std::vector<std::string> check_invariants(const CentralFiber& f) {
    auto bad = check_sigma(f);
    auto more = check_degree_matching(f);
    bad.insert(bad.end(), more.begin(), more.end());
    for (auto& V : f.components) {
        try {
            V.surface.validate();
            if (V.restriction.mults.size() != V.surface.size()) bad.push_back(V.id + ": restriction off configuration");
        } catch (const std::exception& e) {
            bad.push_back(V.id + ": " + e.what());
        }
    }
    return bad;
}

DivisorClass twist_class(const CentralFiber& f, const std::string& comp, const std::vector<std::string>& earlier) {
    const Component& V = f.component(comp);
    DivisorClass s = DivisorClass::zero(V.restriction.base, V.surface.size());
    for (auto& w : earlier)
        if (w != comp && f.adjacent(comp, w)) s = s + f.self_class_of(comp, w);
    return s;
}

namespace {

VanishingCertificate run_checked(const VanishingGoal& g, const std::vector<ScriptStep>& script, Demands& dm,
                                 const std::string& comp, const std::string& kind) {
    try {
        return run_script(g, script, dm);
    } catch (const VanishFailure& e) {
        throw GlueFailure(comp, kind, e);
    } catch (const std::invalid_argument& e) {
        throw GlueFailure(comp, kind, VanishFailure(e.what()));
    }
}

}  // namespace

GlueResult glue_check(const CentralFiber& f, const std::vector<std::vector<GlueItem>>& order) {
    std::set<std::string> seen;
    for (auto& grp : order)
        for (auto& it : grp) {
            f.component(it.component);
            if (!seen.insert(it.component).second) throw std::invalid_argument("component " + it.component + " listed twice");
        }
    for (auto& V : f.components)
        if (!seen.count(V.id)) throw std::invalid_argument("glue order misses component " + V.id);

    GlueResult res;
    Demands dm(f.ambient, true);
    std::vector<std::string> earlier;
    for (auto& grp : order) {
        for (size_t x = 0; x < grp.size(); ++x)
            for (size_t y = x + 1; y < grp.size(); ++y)
                if (f.adjacent(grp[x].component, grp[y].component))
                    throw std::invalid_argument("group members " + grp[x].component + " and " + grp[y].component + " meet");
        bool w_side = std::any_of(grp.begin(), grp.end(), [](const GlueItem& i) { return i.w_side; });
        std::map<std::string, DivisorClass> w_twist;
        std::map<std::string, const std::vector<ScriptStep>*> w_script;
        for (auto& it : grp) {
            const Component& V = f.component(it.component);
            VanishingGoal g{V.surface, V.restriction, f.ambient, {}};
            res.checks.push_back({it.component, "plain", it.component, run_checked(g, it.plain, dm, it.component, "plain")});
            DivisorClass C = twist_class(f, it.component, earlier);
            if (C.is_zero()) continue;
            if (!w_side) {
                if (it.twisted.empty()) throw GlueFailure(it.component, "twisted", VanishFailure("no twisted script"));
                VanishingGoal t = g;
                t.bundle = g.bundle - C;
                res.checks.push_back({it.component, "twisted", it.component,
                                      run_checked(t, it.twisted, dm, it.component, "twisted")});
                continue;
            }
            for (auto& w : earlier) {
                if (!f.adjacent(w, it.component)) continue;
                DivisorClass piece = f.self_class_of(w, it.component);
                auto cur = w_twist.find(w);
                if (cur == w_twist.end())
                    w_twist.emplace(w, piece);
                else
                    cur->second = cur->second + piece;
                auto sc = it.w_scripts.find(w);
                if (sc == it.w_scripts.end()) sc = it.w_scripts.find("*");
                if (sc != it.w_scripts.end()) w_script[w] = &sc->second;
            }
        }
        if (w_side && !w_twist.empty()) {
            for (size_t x = 0; x < earlier.size(); ++x)
                for (size_t y = x + 1; y < earlier.size(); ++y)
                    if (f.adjacent(earlier[x], earlier[y]))
                        throw GlueFailure(grp[0].component, "twisted-W",
                                          VanishFailure("earlier components " + earlier[x] + " and " + earlier[y] + " meet"));
            for (auto& [w, C] : w_twist) {
                if (!w_script.count(w)) throw GlueFailure(grp[0].component, "twisted-W", VanishFailure("no script for " + w));
                const Component& W = f.component(w);
                VanishingGoal t{W.surface, W.restriction - C, f.ambient, {}};
                res.checks.push_back({grp[0].component, "twisted-W", w, run_checked(t, *w_script[w], dm, w, "twisted-W")});
            }
        }
        for (auto& it : grp) earlier.push_back(it.component);
    }
    res.required = dm.required();
    return res;
}

}  // namespace cmdeg
