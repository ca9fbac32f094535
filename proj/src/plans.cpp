#include "cmdeg/plans.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace cmdeg {

namespace {

const std::set<std::string> kOps = {"init", "cremona", "rule", "modify", "throw", "glue", "bound", "assert"};

std::string env_or(const char* var, const std::string& dflt) {
    const char* v = std::getenv(var);
    return (v && *v) ? std::string(v) : dflt;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

const json& need(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(where + ": missing field '" + key + "'");
    return j.at(key);
}

std::string need_str(const json& j, const char* key, const std::string& where) {
    const json& v = need(j, key, where);
    if (!v.is_string()) throw SchemaError(where + ": field '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<int> int_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw SchemaError(where + ": expected an array of integers");
    std::vector<int> r;
    for (auto& x : v) {
        if (!x.is_number_integer()) throw SchemaError(where + ": expected an array of integers");
        r.push_back(x.get<int>());
    }
    return r;
}

std::vector<std::string> str_list(const json& v, const std::string& where) {
    if (!v.is_array()) throw SchemaError(where + ": expected an array of strings");
    std::vector<std::string> r;
    for (auto& x : v) {
        if (!x.is_string()) throw SchemaError(where + ": expected an array of strings");
        r.push_back(x.get<std::string>());
    }
    return r;
}

}  // namespace

std::string data_dir() { return env_or("CMDEG_DATA_DIR", CMDEG_DATA_DIR); }
std::string plans_dir() { return env_or("CMDEG_PLANS_DIR", data_dir() + "/plans"); }
std::string golden_dir() { return env_or("CMDEG_GOLDEN_DIR", data_dir() + "/golden"); }

Plan parse_plan(const json& j) {
    if (!j.is_object()) throw SchemaError("plan must be a JSON object");
    Plan p;
    p.name = need_str(j, "name", "plan");
    if (j.contains("n")) {
        if (!j["n"].is_number_integer() || j["n"].get<int>() < 1) throw SchemaError("plan: n must be a positive integer");
        p.n = j["n"].get<int>();
    }
    if (j.contains("golden")) {
        if (!j["golden"].is_string()) throw SchemaError("plan: golden must be a string");
        p.golden = j["golden"].get<std::string>();
    }
    const json& steps = need(j, "steps", "plan");
    if (!steps.is_array() || steps.empty()) throw SchemaError("plan: steps must be a non-empty array");
    std::set<std::string> ids;
    for (size_t i = 0; i < steps.size(); ++i) {
        const json& s = steps[i];
        std::string where = "step " + std::to_string(i + 1);
        PlanStep st;
        st.op = need_str(s, "op", where);
        if (!kOps.count(st.op)) throw SchemaError(where + ": unknown op '" + st.op + "'");
        if ((i == 0) != (st.op == "init")) throw SchemaError(where + ": init must be the first step and only there");
        st.id = s.contains("id") ? need_str(s, "id", where) : st.op + "-" + std::to_string(i + 1);
        if (!ids.insert(st.id).second) throw SchemaError(where + ": duplicate step id '" + st.id + "'");
        if (s.contains("cite")) st.cite = need_str(s, "cite", where);
        if (st.op == "assert" && st.cite.empty()) throw SchemaError(where + ": assert without citation");
        st.body = s;
        p.steps.push_back(std::move(st));
    }
    return p;
}

Plan load_plan(const std::string& name_or_path) {
    std::string path = name_or_path;
    if (path.find('/') == std::string::npos && path.find(".json") == std::string::npos)
        path = plans_dir() + "/" + path + ".json";
    return parse_plan(read_json(path));
}

std::vector<ScriptStep> parse_script(const json& j) {
    if (!j.is_array()) throw SchemaError("script must be an array");
    std::vector<ScriptStep> out;
    for (auto& s : j) {
        std::string what = need_str(s, "do", "script step");
        std::string where = "script step '" + what + "'";
        ScriptStep st{};
        using K = ScriptStep::Kind;
        if (what == "cremona") {
            st.kind = K::Cremona;
            st.points = int_list(need(s, "points", where), where);
            if (s.contains("case")) st.kase = parse_case(need_str(s, "case", where));
        } else if (what == "rule") {
            st.kind = K::Rule;
            st.rule = parse_rule(need_str(s, "rule", where));
            st.points = int_list(need(s, "anchors", where), where);
        } else if (what == "forget") {
            st.kind = K::Forget;
            st.points = int_list(need(s, "points", where), where);
        } else if (what == "forget_zeros") {
            st.kind = K::ForgetZeros;
        } else if (what == "negexc") {
            st.kind = K::NegExc;
            st.points = int_list(need(s, "points", where), where);
        } else if (what == "reduce") {
            st.kind = K::Reduce;
            st.curves = str_list(need(s, "curves", where), where);
            st.steps = need_str(s, "steps", where);
            if (s.contains("note")) st.text = need_str(s, "note", where);
        } else if (what == "expect") {
            st.kind = K::Expect;
            st.text = need_str(s, "class", where);
        } else if (what == "harbourne") {
            st.kind = K::Harbourne;
            if (s.contains("assert")) st.text = need_str(s, "assert", where);
        } else if (what == "pullback") {
            st.kind = K::Pullback;
        } else if (what == "hirzebruch") {
            st.kind = K::Hirzebruch;
        } else {
            throw SchemaError("unknown script step '" + what + "'");
        }
        out.push_back(std::move(st));
    }
    return out;
}

ThrowSpec parse_throw(const json& j, const CentralFiber& f) {
    const std::string where = "throw";
    ThrowSpec sp;
    sp.component = need_str(j, "component", where);
    const Component& V = f.component(sp.component);
    if (j.contains("exceptional")) {
        const json& e = j["exceptional"];
        if (!e.is_number_integer() || e.get<int>() < 1 || static_cast<size_t>(e.get<int>()) > V.surface.size())
            throw SchemaError(where + ": exceptional must be a point position");
        sp.curve = DivisorClass::exceptional(V.restriction.base, V.surface.size(), e.get<int>() - 1);
    } else {
        sp.curve = parse_class(need_str(j, "curve", where)).cls;
    }
    const json& n = need(j, "n", where);
    if (!n.is_number_integer()) throw SchemaError(where + ": n must be an integer");
    sp.n = n.get<int>();
    if (j.contains("a"))
        for (auto& t : str_list(j["a"], where)) sp.a.push_back(LinearForm::parse(t));
    sp.names = str_list(need(j, "names", where), where);
    for (auto& p : need(j, "points", where)) {
        ThrowPoint tp;
        tp.neighbor = need_str(p, "neighbor", where);
        if (p.contains("curve")) {
            if (!p["curve"].is_number_integer()) throw SchemaError(where + ": point curve must be an index");
            tp.curve = p["curve"].get<size_t>();
        }
        if (p.contains("directed_to")) tp.directed_to = need_str(p, "directed_to", where);
        if (p.contains("tag")) tp.tag = need_str(p, "tag", where);
        sp.points.push_back(tp);
    }
    sp.transversality = need_str(j, "transversality", where);
    return sp;
}

std::vector<std::vector<GlueItem>> parse_glue_order(const json& j) {
    if (!j.is_array()) throw SchemaError("glue order must be an array of groups");
    std::vector<std::vector<GlueItem>> order;
    for (auto& grp : j) {
        if (!grp.is_array()) throw SchemaError("glue group must be an array");
        std::vector<GlueItem> items;
        for (auto& it : grp) {
            GlueItem g;
            g.component = need_str(it, "component", "glue item");
            if (it.contains("plain")) g.plain = parse_script(it["plain"]);
            if (it.contains("twisted")) g.twisted = parse_script(it["twisted"]);
            if (it.contains("w")) {
                if (!it["w"].is_object()) throw SchemaError("glue item w must map components to scripts");
                for (auto& [k, v] : it["w"].items()) g.w_scripts[k] = parse_script(v);
                g.w_side = true;
            }
            items.push_back(std::move(g));
        }
        order.push_back(std::move(items));
    }
    return order;
}

}  // namespace cmdeg
