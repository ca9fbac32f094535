#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "cmdeg/linarith.hpp"

namespace cmdeg {

struct BoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundReport {
    Rational mu;
    Rational seshadri_lower;
    mpz_class k = 1;
    int n = 10;
    ConstraintSet constraints_used;  // projected to (d, m)
    bool effectivity_ok = false;
    std::vector<Inequality> binding;
    std::vector<bool> binding_was_strict;
};

// run_denominators: lcm of denominators met elsewhere in the run (restrictions, throw coefficients)
BoundReport compute_bound(const ConstraintSet& cs, int n, const mpz_class& run_denominators = 1);

struct RegimeReport {
    bool feasible = false;
    std::optional<Witness> witness;
};
RegimeReport check_regime(const ConstraintSet& cs, const std::vector<Inequality>& extra = {});

std::string summary(const BoundReport& r);

}  // namespace cmdeg
