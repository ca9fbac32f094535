#include "cmdeg/bounds.hpp"

#include <sstream>

namespace cmdeg {

BoundReport compute_bound(const ConstraintSet& cs, int n, const mpz_class& run_denominators) {
    if (!decide_feasible(cs)) throw BoundError("constraint set is infeasible");
    BoundReport r;
    r.n = n;
    if (run_denominators <= 0) throw BoundError("denominator must be positive");
    r.k = run_denominators;
    // an inequality is cleared by positive rescaling; only class coefficients constrain k

    ConstraintSet projected = eliminate(cs, kA);
    r.constraints_used = projected;
    MuResult mu = mu_inf(projected.closure());
    if (mu.kind == MuResult::Kind::Infeasible) throw BoundError("projected polyhedron is empty");
    if (mu.kind == MuResult::Kind::MinusInfinity) throw BoundError("d/m is unbounded below");
    if (!mu.unbounded_d || !mu.unbounded_m) throw BoundError("projected polyhedron is not unbounded in both d and m");
    if (mu.mu <= 0) throw BoundError("mu must be positive");
    r.mu = mu.mu;
    r.seshadri_lower = 1 / mu.mu;
    r.effectivity_ok = r.mu * r.mu > n;
    if (!r.effectivity_ok) throw BoundError("mu^2 <= n: the bundles are not known to be effective");
    for (auto& b : mu.binding) {
        r.binding.push_back(b);
        bool strict = false;
        std::string key = b.normalized().form.str();
        for (auto& q : projected.items())
            if (q.strict() && q.normalized().form.str() == key) strict = true;
        r.binding_was_strict.push_back(strict);
    }
    return r;
}

RegimeReport check_regime(const ConstraintSet& cs, const std::vector<Inequality>& extra) {
    ConstraintSet all = cs;
    for (auto& q : extra) all.add(q);
    RegimeReport r;
    r.feasible = decide_feasible(all);
    if (r.feasible) r.witness = find_witness(all);
    return r;
}

std::string summary(const BoundReport& r) {
    std::ostringstream o;
    o << "mu = " << rat_str(r.mu) << "\n";
    o << "seshadri lower bound = " << rat_str(r.seshadri_lower) << "\n";
    o << "k = " << r.k.get_str() << "\n";
    o << "effective (mu^2 > " << r.n << "): " << (r.effectivity_ok ? "yes" : "no") << "\n";
    for (size_t i = 0; i < r.binding.size(); ++i)
        o << "binding: " << r.binding[i].str() << (r.binding_was_strict[i] ? " (strict in the run)" : "") << "\n";
    return o.str();
}

}  // namespace cmdeg
