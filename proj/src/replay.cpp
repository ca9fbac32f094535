#include <fstream>
#include <set>
#include <sstream>

#include "cmdeg/plans.hpp"

namespace cmdeg {

namespace {

mpz_class lcm(const mpz_class& x, const mpz_class& y) {
    mpz_class r;
    mpz_lcm(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return r;
}

std::string str_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) throw SchemaError(std::string("missing string field '") + key + "'");
    return j[key].get<std::string>();
}

std::string point_id(const Component& V, const json& pos) {
    if (!pos.is_number_integer() || pos.get<int>() < 1 || static_cast<size_t>(pos.get<int>()) > V.surface.size())
        throw SchemaError("point position out of range on " + V.id);
    return V.surface.points[pos.get<int>() - 1].id;
}

ConstraintSet parse_set(const json& j) {
    ConstraintSet cs;
    if (j.is_null()) return cs;
    if (!j.is_array()) throw SchemaError("inequality list must be an array");
    for (auto& s : j) {
        if (!s.is_string()) throw SchemaError("inequality must be a string");
        cs.add(parse_inequality(s.get<std::string>()));
    }
    return cs;
}

bool same_region(const ConstraintSet& x, const ConstraintSet& y) {
    for (auto& q : x.items())
        if (!entails(y, q)) return false;
    for (auto& q : y.items())
        if (!entails(x, q)) return false;
    return true;
}

ConstraintSet glue_constraints(const ReplayState& st) {
    ConstraintSet cs = st.fiber.ambient;
    if (st.glue) cs.add_all(st.glue->required);
    cs.add_all(st.assumptions);
    return cs;
}

std::vector<std::string> list_str(const json& j) {
    std::vector<std::string> r;
    if (j.is_null()) return r;
    if (!j.is_array()) throw SchemaError("expected an array of strings");
    for (auto& x : j) {
        if (!x.is_string()) throw SchemaError("expected an array of strings");
        r.push_back(x.get<std::string>());
    }
    return r;
}

void run_assert(ReplayState& st, const json& b) {
    std::string kind = str_field(b, "kind");
    const CentralFiber& f = st.fiber;
    if (kind == "restriction") {
        const Component& V = f.component(str_field(b, "component"));
        DivisorClass want = parse_class(str_field(b, "class")).cls;
        if (V.restriction != want)
            throw std::invalid_argument(V.id + " restriction is " + print_class(V.restriction, &V.surface));
    } else if (kind == "specialty") {
        const Component& V = f.component(str_field(b, "component"));
        std::vector<DivisorClass> cands;
        for (auto& t : list_str(b.value("curves", json()))) cands.push_back(parse_class(t).cls);
        Inequality cond = parse_inequality(str_field(b, "condition"));
        ConstraintSet cs = f.ambient;
        cs.add_all(st.assumptions);
        auto found = detect_specialty(V.restriction, cands, cs, false);
        for (auto& c : cands) {
            bool hit = false;
            for (auto& s : found)
                if (s.curve == c) {
                    if (!same_region(ConstraintSet{s.condition}, ConstraintSet{cond}))
                        throw std::invalid_argument("specialty condition " + s.condition.str() + " differs from " + cond.str());
                    hit = true;
                }
            if (!hit) throw std::invalid_argument("no specialty found for " + print_class(c, &V.surface));
        }
        if (b.contains("count") && found.size() != b["count"].get<size_t>())
            throw std::invalid_argument("specialty count " + std::to_string(found.size()));
        st.notes.push_back("specialty: " + std::to_string(found.size()) + " curves on " + V.id + " under " + cond.str());
    } else if (kind == "bad_curve") {
        ConstraintSet under = st.assumptions;
        under.add_all(parse_set(b.value("under", json())));
        DivisorClass want = parse_class(str_field(b, "curve")).cls;
        std::string comp = str_field(b, "component");
        bool hit = false;
        for (auto& bc : find_bad_curves(f, under))
            if (bc.component == comp && bc.curve == want) {
                hit = true;
                if (b.contains("value") && bc.value != LinearForm::parse(str_field(b, "value")))
                    throw std::invalid_argument("bad curve value " + bc.value.str());
            }
        if (!hit) throw std::invalid_argument("curve not flagged on " + comp);
    } else if (kind == "glue_set") {
        if (!st.glue) throw std::invalid_argument("no glue result to compare");
        ConstraintSet mine = glue_constraints(st), theirs = parse_set(b.value("set", json()));
        theirs.add_all(f.ambient);
        theirs.add_all(st.assumptions);
        if (!same_region(mine, theirs)) throw std::invalid_argument("glue constraints differ from the asserted set");
    } else if (kind == "regime") {
        auto r = check_regime(glue_constraints(st), parse_set(b.value("extra", json())).items());
        bool want = b.value("feasible", true);
        if (r.feasible != want) throw std::invalid_argument(std::string("regime is ") + (r.feasible ? "feasible" : "infeasible"));
        if (r.witness)
            st.notes.push_back("witness d=" + rat_str(r.witness->d) + " m=" + rat_str(r.witness->m) + " a=" + rat_str(r.witness->a));
    } else if (kind == "assume") {
        ConstraintSet add = parse_set(b.value("inequalities", json()));
        ConstraintSet all = f.ambient;
        all.add_all(st.assumptions);
        all.add_all(add);
        if (!decide_feasible(all)) throw std::invalid_argument("assumptions contradict the current constraints");
        st.assumptions.add_all(add);
    } else {
        throw SchemaError("unknown assert kind '" + kind + "'");
    }
}

}  // namespace

mpz_class fiber_denominators(const CentralFiber& f) {
    mpz_class k = f.throw_denominators;
    for (auto& V : f.components) {
        k = lcm(k, V.restriction.denominator_lcm());
        k = lcm(k, V.self.denominator_lcm());
    }
    for (auto& e : f.adjacencies) {
        for (auto& c : e.curve_on_a) k = lcm(k, c.denominator_lcm());
        for (auto& c : e.curve_on_b) k = lcm(k, c.denominator_lcm());
    }
    return k;
}

CentralFiber init_fiber(const json& body, int* n_out) {
    std::string split = body.contains("split") ? str_field(body, "split") : "4+6";
    if (n_out) *n_out = 10;
    return initial_fiber(split);
}

void apply_step(ReplayState& st, const PlanStep& s) {
    const json& b = s.body;
    CentralFiber& f = st.fiber;
    if (s.op == "cremona") {
        const Component& V = f.component(str_field(b, "component"));
        if (!b.contains("points") || !b["points"].is_array() || b["points"].size() != 3)
            throw SchemaError("cremona needs three points");
        CremonaMove mv;
        for (int t = 0; t < 3; ++t) mv.base_points[t] = point_id(V, b["points"][t]);
        mv.kase = b.contains("case") ? parse_case(str_field(b, "case")) : classify(V.surface, mv.base_points);
        for (auto& e : b.value("edits", json::array())) {
            AnnotationEdit ed;
            ed.point = point_id(V, e.at("point"));
            if (e.contains("parent"))
                ed.parent = e["parent"].is_null() ? std::optional<std::string>() : point_id(V, e["parent"]);
            if (e.contains("directed_to"))
                ed.directed_to = e["directed_to"].is_null() ? std::optional<std::string>() : point_id(V, e["directed_to"]);
            mv.script.push_back(ed);
        }
        f = cremona_component(f, V.id, mv);
    } else if (s.op == "rule") {
        const Component& V = f.component(str_field(b, "component"));
        if (!b.contains("anchors") || !b["anchors"].is_array() || b["anchors"].size() != 5)
            throw SchemaError("rule needs five anchors (0 = absent)");
        std::array<std::optional<std::string>, 5> anchors;
        for (int t = 0; t < 5; ++t)
            if (b["anchors"][t] != 0) anchors[t] = point_id(V, b["anchors"][t]);
        f = rule_component(f, V.id, parse_rule(str_field(b, "rule")), anchors);
    } else if (s.op == "modify") {
        std::vector<std::string> comps;
        if (b.contains("components"))
            comps = list_str(b["components"]);
        else
            comps.push_back(str_field(b, "component"));
        LinearForm coeff = LinearForm::parse(str_field(b, "coeff"));
        for (auto& c : comps) f = modify_bundle(f, c, coeff);
    } else if (s.op == "throw") {
        if (!b.contains("throws") || !b["throws"].is_array()) throw SchemaError("throw needs a throws array");
        std::vector<ThrowSpec> specs;
        for (auto& t : b["throws"]) specs.push_back(parse_throw(t, f));
        f = throw_curves(f, specs);
        if (b.contains("rename")) {
            std::map<std::string, std::string> names;
            for (auto& [k, v] : b["rename"].items()) names[k] = v.get<std::string>();
            f = rename_components(f, names);
        }
    } else if (s.op == "glue") {
        auto order = parse_glue_order(b.at("order"));
        st.glue = glue_check(f, order);
        st.notes.push_back("glue: " + std::to_string(st.glue->checks.size()) + " vanishing checks, " +
                           std::to_string(st.glue->required.size()) + " inequalities");
    } else if (s.op == "bound") {
        ConstraintSet cs = glue_constraints(st);
        cs.add_all(parse_set(b.value("extra", json())));
        if (!st.glue && !b.contains("extra")) throw std::invalid_argument("bound needs a glue step or explicit constraints");
        st.bound = compute_bound(cs, st.n, st.denominators);
        st.notes.push_back("bound: mu = " + rat_str(st.bound->mu));
    } else if (s.op == "assert") {
        run_assert(st, b);
    } else {
        throw SchemaError("op '" + s.op + "' cannot be applied here");
    }
    auto bad = check_invariants(f);
    if (!bad.empty()) throw std::logic_error("invariant violated: " + bad.front());
    st.denominators = lcm(st.denominators, fiber_denominators(f));
}

namespace {

bool matches(const PlanStep& s, size_t index, const std::string& until) {
    return s.id == until || std::to_string(index) == until;
}

void replay_into(const Plan& p, const std::optional<std::string>& until, ReplayState& st, ReplayResult& out,
                 int depth) {
    if (depth > 8) throw SchemaError("plan chaining too deep");
    if (until) {
        bool found = false;
        for (size_t i = 0; i < p.steps.size(); ++i) found = found || matches(p.steps[i], i + 1, *until);
        if (!found) throw SchemaError("plan " + p.name + " has no step '" + *until + "'");
    }
    st.n = p.n;
    for (size_t i = 0; i < p.steps.size(); ++i) {
        const PlanStep& s = p.steps[i];
        try {
            if (s.op == "init") {
                if (s.body.contains("from")) {
                    Plan base = load_plan(str_field(s.body, "from"));
                    std::optional<std::string> u;
                    if (s.body.contains("until")) u = str_field(s.body, "until");
                    ReplayResult inner;
                    replay_into(base, u, st, inner, depth + 1);
                    st.glue.reset();
                    st.bound.reset();
                    st.n = p.n;
                } else {
                    st = ReplayState{};
                    st.n = p.n;
                    st.fiber = init_fiber(s.body);
                    st.denominators = fiber_denominators(st.fiber);
                }
                auto bad = check_invariants(st.fiber);
                if (!bad.empty()) throw std::logic_error("invariant violated: " + bad.front());
            } else {
                apply_step(st, s);
            }
        } catch (const SchemaError& e) {
            throw SchemaError("step " + std::to_string(i + 1) + " (" + s.id + "): " + e.what());
        } catch (const StepFailure&) {
            throw;
        } catch (const VanishFailure& e) {
            throw StepFailure(i + 1, s.id, s.cite, e.what(), e.missing);
        } catch (const std::exception& e) {
            throw StepFailure(i + 1, s.id, s.cite, e.what());
        }
        Snapshot snap{i + 1, s.op, s.id, s.cite, st.fiber, st.notes};
        st.notes.clear();
        out.snapshots.push_back(std::move(snap));
        if (until && matches(s, i + 1, *until)) break;
    }
    out.glue = st.glue;
    out.bound = st.bound;
    out.denominators = st.denominators;
}

}  // namespace

ReplayState replay_state(const Plan& p, const std::optional<std::string>& until, ReplayResult* out) {
    ReplayState st;
    ReplayResult local;
    replay_into(p, until, st, out ? *out : local, 0);
    return st;
}

ReplayResult replay(const Plan& p, const std::optional<std::string>& until) {
    ReplayResult out;
    replay_state(p, until, &out);
    return out;
}

}  // namespace cmdeg
