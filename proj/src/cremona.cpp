#include "cmdeg/cremona.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmdeg {

std::string case_name(CremonaCase c) {
    switch (c) {
        case CremonaCase::Distinct: return "distinct";
        case CremonaCase::OneInfinitelyNear: return "one_infinitely_near";
        default: return "chain";
    }
}

CremonaCase parse_case(const std::string& s) {
    if (s == "distinct") return CremonaCase::Distinct;
    if (s == "one_infinitely_near") return CremonaCase::OneInfinitelyNear;
    if (s == "chain") return CremonaCase::Chain;
    throw std::invalid_argument("unknown Cremona case: " + s);
}

Rule parse_rule(const std::string& s) {
    if (s == "I") return Rule::I;
    if (s == "II") return Rule::II;
    if (s == "III") return Rule::III;
    throw std::invalid_argument("unknown rule: " + s);
}

DivisorClass apply_cremona(const DivisorClass& L, const std::array<size_t, 3>& idx) {
    if (L.base.kind != SurfaceKind::P2) throw std::invalid_argument("Cremona moves act on P2 blow-ups only");
    auto [i, j, k] = idx;
    if (i == j || j == k || i == k) throw std::invalid_argument("Cremona base points must differ");
    if (std::max({i, j, k}) >= L.mults.size()) throw std::out_of_range("Cremona base point out of range");
    DivisorClass r = L;
    const LinearForm &d = L.d0, &mi = L.mults[i], &mj = L.mults[j], &mk = L.mults[k];
    r.d0 = d * Rational(2) - mi - mj - mk;
    r.mults[i] = d - mj - mk;
    r.mults[j] = d - mi - mk;
    r.mults[k] = d - mi - mj;
    return r;
}

namespace {

const PointNode& node(const Configuration& c, const std::string& id) {
    int i = c.index_of(id);
    if (i < 0) throw std::invalid_argument("base point " + id + " not in configuration");
    return c.points[i];
}

PointNode& node(Configuration& c, const std::string& id) {
    int i = c.index_of(id);
    if (i < 0) throw std::invalid_argument("base point " + id + " not in configuration");
    return c.points[i];
}

bool is_parent(const Configuration& c, const std::string& child, const std::string& par) {
    const PointNode& n = node(c, child);
    return n.parent && *n.parent == par;
}

void check_tags(const Configuration& c, const std::array<std::string, 3>& pts) {
    // collinear:<name> tags shared by all three base points violate the hypothesis
    const std::string& t0 = node(c, pts[0]).tag;
    if (t0.rfind("collinear:", 0) == 0 && node(c, pts[1]).tag == t0 && node(c, pts[2]).tag == t0)
        throw std::invalid_argument("Cremona base points annotated collinear (" + t0 + ")");
}

std::array<size_t, 3> positions(const Configuration& c, const std::array<std::string, 3>& pts) {
    std::array<size_t, 3> r{};
    for (int t = 0; t < 3; ++t) {
        int i = c.index_of(pts[t]);
        if (i < 0) throw std::invalid_argument("base point " + pts[t] + " not in configuration");
        r[t] = static_cast<size_t>(i);
    }
    return r;
}

void transform_all(const Configuration& c, std::vector<DivisorClass>& classes,
                   const std::array<std::string, 3>& pts) {
    auto idx = positions(c, pts);
    for (auto& L : classes) {
        if (L.mults.size() != c.size()) throw std::invalid_argument("class does not live on configuration");
        L = apply_cremona(L, idx);
    }
}

void permute(Configuration& c, std::vector<DivisorClass>& classes, const std::vector<size_t>& slots,
             const std::vector<size_t>& sources) {
    std::vector<PointNode> pts = c.points;
    std::vector<DivisorClass> old = classes;
    for (size_t t = 0; t < slots.size(); ++t) {
        c.points[slots[t]] = pts[sources[t]];
        for (size_t q = 0; q < classes.size(); ++q) classes[q].mults[slots[t]] = old[q].mults[sources[t]];
    }
}

}  // namespace

CremonaCase classify(const Configuration& c, const std::array<std::string, 3>& pts) {
    int links = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b && is_parent(c, pts[a], pts[b])) ++links;
    if (links == 0) return CremonaCase::Distinct;
    if (links == 1) return CremonaCase::OneInfinitelyNear;
    // chain i <- j <- k in some order
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int k = 0; k < 3; ++k)
                if (a != b && b != k && a != k && is_parent(c, pts[b], pts[a]) && is_parent(c, pts[k], pts[b]))
                    return CremonaCase::Chain;
    throw std::invalid_argument("base points do not form a Cremona pattern");
}

void apply_move(Configuration& c, std::vector<DivisorClass>& classes, const CremonaMove& mv) {
    if (c.base.kind != SurfaceKind::P2) throw std::invalid_argument("Cremona moves act on P2 blow-ups only");
    check_tags(c, mv.base_points);
    CremonaCase actual = classify(c, mv.base_points);
    if (actual != mv.kase)
        throw std::invalid_argument("Cremona hypothesis violated: declared " + case_name(mv.kase) +
                                    ", configuration gives " + case_name(actual));
    transform_all(c, classes, mv.base_points);
    for (auto& e : mv.script) {
        PointNode& n = node(c, e.point);
        if (e.parent) n.parent = *e.parent;
        if (e.directed_to) n.directed_to = *e.directed_to;
    }
    c.validate();
}

DivisorClass transform_incident_curve(const DivisorClass& C, const Configuration& c, const CremonaMove& mv) {
    return apply_cremona(C, positions(c, mv.base_points));
}

void apply_rule(Configuration& c, std::vector<DivisorClass>& classes, Rule r,
                const std::array<std::optional<std::string>, 5>& anchors) {
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("rule pattern mismatch: " + why);
    };
    if (c.base.kind != SurfaceKind::P2) fail("rules act on P2 blow-ups only");
    auto need = [&](int i) -> const std::string& {
        if (!anchors[i]) fail("anchor p" + std::to_string(i + 1) + " missing");
        node(c, *anchors[i]);
        return *anchors[i];
    };
    auto dir_is = [&](const std::string& p, const std::optional<std::string>& target) {
        return node(c, p).directed_to == target;
    };

    if (r == Rule::I) {
        const std::string &p2 = need(1), &p3 = need(2), &p4 = need(3);
        const auto &p1 = anchors[0], &p5 = anchors[4];
        if (p1) node(c, *p1);
        if (p5) node(c, *p5);
        if (!is_parent(c, p3, p2)) fail("p3 is not infinitely near p2");
        if (!dir_is(p3, p1)) fail(p1 ? "p3 not directed to p1" : "p3 is directed");
        if (p5) {
            if (!is_parent(c, *p5, p4)) fail("p5 is not infinitely near p4");
            if (!dir_is(*p5, p1)) fail(p1 ? "p5 not directed to p1" : "p5 is directed");
        }
        if (node(c, p2).parent || node(c, p4).parent) fail("p2 and p4 must be proper points");
        if (p1 && node(c, *p1).parent) fail("p1 must be a proper point");
        transform_all(c, classes, {p2, p3, p4});
        node(c, p3).directed_to = p5;
        if (p1) {
            node(c, *p1).parent = p4;
            node(c, *p1).directed_to = p5;
        }
        if (p5) {
            node(c, *p5).parent.reset();
            node(c, *p5).directed_to.reset();
        }
        std::vector<std::string> seq = {p2, p3, p4};
        if (p1) seq.push_back(*p1);
        if (p5) seq.push_back(*p5);
        std::vector<size_t> slots, sources;
        for (auto& id : seq) {
            slots.push_back(c.index_of(id));
            sources.push_back(c.index_of(id));
        }
        std::sort(slots.begin(), slots.end());
        permute(c, classes, slots, sources);
    } else if (r == Rule::II) {
        const std::string &p1 = need(0), &p2 = need(1), &p3 = need(2), &p4 = need(3), &p5 = need(4);
        if (!is_parent(c, p3, p2)) fail("p3 is not infinitely near p2");
        if (!is_parent(c, p5, p4)) fail("p5 is not infinitely near p4");
        if (node(c, p1).parent || node(c, p2).parent || node(c, p4).parent)
            fail("p1, p2, p4 must be proper points");
        auto d3 = node(c, p3).directed_to, d5 = node(c, p5).directed_to;
        if (d3 && (*d3 == p1 || *d3 == p4)) fail("p3 directed to p1 or p4");
        if (d5 && (*d5 == p1 || *d5 == p2)) fail("p5 directed to p1 or p2");
        transform_all(c, classes, {p1, p2, p4});
        node(c, p3).parent.reset();
        node(c, p5).parent.reset();
        transform_all(c, classes, {p1, p3, p5});
        node(c, p2).parent = p3;
        node(c, p4).parent = p5;
        for (auto* id : {&p2, &p3, &p4, &p5}) node(c, *id).directed_to.reset();
        std::vector<std::string> seq = {p1, p3, p2, p5, p4};
        std::vector<size_t> slots, sources;
        for (auto& id : seq) {
            slots.push_back(c.index_of(id));
            sources.push_back(c.index_of(id));
        }
        std::sort(slots.begin(), slots.end());
        permute(c, classes, slots, sources);
    } else {
        const std::string &p1 = need(0), &p2 = need(1), &p3 = need(2), &p4 = need(3), &p5 = need(4);
        if (!is_parent(c, p5, p4)) fail("p5 is not infinitely near p4");
        if (!dir_is(p5, p1)) fail("p5 not directed to p1");
        for (auto* id : {&p1, &p2, &p3, &p4})
            if (node(c, *id).parent) fail("p1..p4 must be proper points");
        transform_all(c, classes, {p1, p2, p3});
    }
    c.validate();
}

}  // namespace cmdeg
