#include <fstream>
#include <sstream>

#include "cmdeg/plans.hpp"

namespace cmdeg {

namespace {

json optional_str(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

json set_json(const ConstraintSet& cs) {
    json a = json::array();
    for (auto& q : cs.items()) a.push_back(q.str());
    return a;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

json fiber_json(const CentralFiber& f) {
    json comps = json::array();
    for (auto& V : f.components) {
        json pts = json::array();
        for (auto& p : V.surface.points)
            pts.push_back({{"id", p.id}, {"parent", optional_str(p.parent)}, {"directed_to", optional_str(p.directed_to)},
                           {"tag", p.tag}});
        json w = json::object();
        for (auto& [k, v] : V.weight) w[k] = rat_str(v);
        comps.push_back({{"id", V.id},
                         {"surface", V.restriction.base.str()},
                         {"points", pts},
                         {"restriction", print_class(V.restriction, &V.surface)},
                         {"self", print_class(V.self, &V.surface)},
                         {"weight", w}});
    }
    json adj = json::array();
    for (auto& e : f.adjacencies) {
        json ca = json::array(), cb = json::array();
        for (auto& c : e.curve_on_a) ca.push_back(print_class(c, &f.component(e.a).surface));
        for (auto& c : e.curve_on_b) cb.push_back(print_class(c, &f.component(e.b).surface));
        adj.push_back({{"a", e.a}, {"b", e.b}, {"curves_on_a", ca}, {"curves_on_b", cb}});
    }
    return {{"components", comps}, {"adjacencies", adj}, {"constraints", set_json(f.ambient)},
            {"history", f.history}, {"throw_denominators", f.throw_denominators.get_str()}};
}

json bound_json(const BoundReport& r) {
    json binding = json::array();
    for (size_t i = 0; i < r.binding.size(); ++i)
        binding.push_back({{"inequality", r.binding[i].str()}, {"strict_in_run", bool(r.binding_was_strict[i])}});
    return {{"mu", rat_str(r.mu)},
            {"seshadri_lower", rat_str(r.seshadri_lower)},
            {"k", r.k.get_str()},
            {"n", r.n},
            {"effectivity_ok", r.effectivity_ok},
            {"constraints_used", set_json(r.constraints_used)},
            {"binding", binding}};
}

json glue_json(const GlueResult& g) {
    json checks = json::array();
    for (auto& c : g.checks)
        checks.push_back({{"component", c.component}, {"kind", c.kind}, {"target", c.target},
                          {"terminal", c.cert.terminal}, {"steps", c.cert.steps}});
    return {{"required", set_json(g.required)}, {"checks", checks}};
}

json replay_json(const ReplayResult& r) {
    json snaps = json::array();
    for (auto& s : r.snapshots)
        snaps.push_back({{"index", s.index}, {"op", s.op}, {"id", s.id}, {"cite", s.cite}, {"notes", s.notes},
                         {"fiber", fiber_json(s.fiber)}});
    json out = {{"snapshots", snaps}, {"denominators", r.denominators.get_str()}};
    out["glue"] = r.glue ? glue_json(*r.glue) : json(nullptr);
    out["bound"] = r.bound ? bound_json(*r.bound) : json(nullptr);
    return out;
}

std::string fiber_text(const CentralFiber& f) {
    std::ostringstream o;
    for (auto& V : f.components)
        o << V.id << " = " << print_class(V.restriction, &V.surface) << "\n";
    return o.str();
}

std::vector<GoldenEntry> load_golden(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("missing golden file " + path);
    std::vector<GoldenEntry> out;
    std::string line, step;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[' && line.back() == ']') {
            step = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find(" = ");
        if (eq == std::string::npos || step.empty()) throw SchemaError(path + ":" + std::to_string(no) + ": malformed line");
        out.push_back({step, trim(line.substr(0, eq)), trim(line.substr(eq + 3)), no});
    }
    return out;
}

std::vector<std::string> verify(const Plan& p, const ReplayResult& r, const std::vector<GoldenEntry>& golden) {
    std::vector<std::string> diffs;
    bool bound_seen = false;
    for (auto& g : golden) {
        std::string where = "line " + std::to_string(g.line) + ", step " + g.step + ": ";
        if (g.key == "mu" || g.key == "bound" || g.key == "k") {
            bound_seen = bound_seen || g.key == "mu";
            if (!r.bound) {
                diffs.push_back(where + "no bound computed");
                continue;
            }
            std::string got = g.key == "mu" ? rat_str(r.bound->mu)
                              : g.key == "bound" ? rat_str(r.bound->seshadri_lower)
                                                 : r.bound->k.get_str();
            if (rat_parse(got) != rat_parse(g.value)) diffs.push_back(where + g.key + " " + got + " != golden " + g.value);
            continue;
        }
        const Snapshot* snap = nullptr;
        for (auto& s : r.snapshots)
            if (s.id == g.step) snap = &s;
        if (!snap) {
            diffs.push_back(where + "no snapshot for this step");
            continue;
        }
        if (snap->fiber.index_of(g.key) < 0) {
            diffs.push_back(where + "component " + g.key + " absent");
            continue;
        }
        const Component& V = snap->fiber.component(g.key);
        DivisorClass want;
        try {
            want = parse_class(g.value).cls;
        } catch (const std::exception& e) {
            diffs.push_back(where + "unparsable golden class " + g.value);
            continue;
        }
        if (want.base == V.restriction.base && want.mults.size() == V.restriction.mults.size() && want == V.restriction)
            continue;
        diffs.push_back(where + g.key + " restriction " + print_class(V.restriction, &V.surface) + " != golden " + g.value);
    }
    bool has_bound = false;
    for (auto& s : p.steps) has_bound = has_bound || s.op == "bound";
    if (has_bound && !bound_seen && r.bound) diffs.push_back("missing golden mu entry for plan " + p.name);
    return diffs;
}

std::vector<Citation> load_citations(const std::string& path) {
    std::string file = path.empty() ? plans_dir() + "/citations.json" : path;
    std::ifstream in(file);
    if (!in) throw SchemaError("cannot open citation index " + file);
    json j = json::parse(in);
    std::vector<Citation> out;
    for (auto& c : j) out.push_back({c.at("key").get<std::string>(), c.at("heading").get<std::string>(),
                                     c.at("quote").get<std::string>()});
    return out;
}

std::vector<std::string> check_citations(const Plan& p, const std::vector<Citation>& index) {
    std::vector<std::string> bad;
    for (size_t i = 0; i < p.steps.size(); ++i) {
        const auto& s = p.steps[i];
        bool ok = false;
        for (auto& c : index) ok = ok || c.key == s.cite;
        if (!ok) bad.push_back(p.name + " step " + std::to_string(i + 1) + " (" + s.id + "): citation '" + s.cite + "' not in index");
    }
    return bad;
}

}  // namespace cmdeg
