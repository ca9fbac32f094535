#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cmdeg/vanish.hpp"

namespace cmdeg {

struct Component {
    std::string id;
    Configuration surface;
    DivisorClass restriction;
    DivisorClass self;                        // O_V(V)
    std::map<std::string, Rational> weight;   // local multiplicities of the fibre, own id included
};

// parallel lists: curve_on_a[i] and curve_on_b[i] are the same curve piece
struct Adjacency {
    std::string a, b;
    std::vector<DivisorClass> curve_on_a, curve_on_b;
};

struct CentralFiber {
    std::vector<Component> components;
    std::vector<Adjacency> adjacencies;
    ConstraintSet ambient;
    std::vector<std::string> history;
    mpz_class throw_denominators = 1;  // lcm over throw coefficients

    int index_of(const std::string& id) const;
    const Component& component(const std::string& id) const;
    Component& component(const std::string& id);
    bool adjacent(const std::string& x, const std::string& y) const;
    std::vector<std::string> neighbors(const std::string& id) const;
    // the curves of the x-y adjacency seen on x
    std::vector<DivisorClass> curves_on(const std::string& x, const std::string& y) const;
    // O_x(y): the self class when x == y, else the sum of intersection curves
    DivisorClass self_class_of(const std::string& x, const std::string& y) const;
};

CentralFiber initial_fiber(const std::string& split = "4+6");

struct NormalBundle {
    int first = -1;
    LinearForm second;  // -s
};
NormalBundle three_point(const CentralFiber& f, const std::string& comp, const DivisorClass& C);

CentralFiber modify_bundle(const CentralFiber& f, const std::string& comp, const LinearForm& coeff);

struct ThrowPoint {
    std::string neighbor;
    static constexpr size_t kAuto = static_cast<size_t>(-1);
    size_t curve = kAuto;                     // index into the adjacency's parallel list; kAuto picks the piece met
    std::optional<std::string> directed_to;   // for the first infinitely near point of the chain
    std::string tag;
};

struct ThrowSpec {
    std::string component;
    DivisorClass curve;
    int n = 1;
    std::vector<LinearForm> a;       // a_1..a_n; empty means a_k = (k/n) a_n
    std::vector<std::string> names;  // ids of T_1..T_n
    std::vector<ThrowPoint> points;
    std::string transversality;      // justification text, required
};

CentralFiber throw_curves(const CentralFiber& f, const std::vector<ThrowSpec>& specs);

// Cremona steps on one component: restriction, self class and adjacency curves transform together
CentralFiber cremona_component(const CentralFiber& f, const std::string& comp, const CremonaMove& mv);
CentralFiber rule_component(const CentralFiber& f, const std::string& comp, Rule r,
                            const std::array<std::optional<std::string>, 5>& anchors);

// component names follow the degeneration stage (P1 -> P2, ...)
CentralFiber rename_components(const CentralFiber& f, const std::map<std::string, std::string>& names);

struct BadCurve {
    std::string component;
    DivisorClass curve;
    LinearForm value;     // L.E
    Inequality condition; // -(L.E) - 2 >= 0
};
std::vector<BadCurve> find_bad_curves(const CentralFiber& f, const ConstraintSet& extra = {});

// invariant checks; each returns a description per violation
std::vector<std::string> check_sigma(const CentralFiber& f);
std::vector<std::string> check_degree_matching(const CentralFiber& f);
std::vector<std::string> check_invariants(const CentralFiber& f);

struct GlueItem {
    std::string component;
    std::vector<ScriptStep> plain;
    std::vector<ScriptStep> twisted;                          // side V
    std::map<std::string, std::vector<ScriptStep>> w_scripts; // side W, per earlier component
    bool w_side = false;
};

struct GlueCheckRecord {
    std::string component;
    std::string kind;   // plain | twisted | twisted-W
    std::string target; // component carrying the goal
    VanishingCertificate cert;
};

struct GlueResult {
    ConstraintSet required;
    std::vector<GlueCheckRecord> checks;
};

struct GlueFailure : VanishFailure {
    std::string component;
    std::string kind;
    GlueFailure(const std::string& comp, const std::string& k, const VanishFailure& e)
        : VanishFailure(comp + " (" + k + "): " + e.what(), e.missing), component(comp), kind(k) {}
};

// groups in order; each group is a disjoint union of components
GlueResult glue_check(const CentralFiber& f, const std::vector<std::vector<GlueItem>>& order);

// the classes C_{k-1} a twisted check uses
DivisorClass twist_class(const CentralFiber& f, const std::string& comp, const std::vector<std::string>& earlier);

}  // namespace cmdeg
