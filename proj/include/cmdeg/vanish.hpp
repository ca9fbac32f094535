#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmdeg/cremona.hpp"

namespace cmdeg {

struct VanishFailure : std::runtime_error {
    std::vector<Inequality> missing;
    VanishFailure(const std::string& what, std::vector<Inequality> miss = {})
        : std::runtime_error(what), missing(std::move(miss)) {}
};

// entails-recorder: every demanded inequality lands in `required`.
// In collect mode a non-entailed but consistent demand is assumed.
class Demands {
public:
    explicit Demands(ConstraintSet context = {}, bool collect = false)
        : context_(std::move(context)), collect_(collect) {}

    bool demand(const Inequality& q);  // throws VanishFailure on contradiction
    const ConstraintSet& required() const { return required_; }
    const ConstraintSet& context() const { return context_; }
    const std::vector<Inequality>& missing() const { return missing_; }
    bool collecting() const { return collect_; }

private:
    ConstraintSet context_;
    ConstraintSet required_;
    std::vector<Inequality> missing_;
    bool collect_;
};

struct VanishingGoal {
    Configuration surface;
    DivisorClass bundle;
    ConstraintSet context;
    std::vector<std::string> trace;
};

enum class StdVerdict { Yes, No, Undecidable };

struct StandardResult {
    StdVerdict verdict = StdVerdict::Undecidable;
    ConstraintSet used;
    std::vector<Inequality> missing;
};

// conditions for standardness; an empty order means any admissible order
std::vector<Inequality> standard_conditions(const DivisorClass& L, const Configuration& c,
                                            const std::vector<size_t>& order = {});
StandardResult is_standard(const DivisorClass& L, const Configuration& c, const ConstraintSet& cs,
                           const std::vector<size_t>& order = {});
StandardResult is_standard(const DivisorClass& L, const ConstraintSet& cs);  // general points

std::optional<std::vector<Rational>> standard_decomposition(const DivisorClass& L);

// true when the <= 8 proper general points rule applies
bool auto_anticanonical(const Configuration& c);

struct HarbourneResult {
    bool certified = false;
    ConstraintSet used;
    std::string reason;
};

// anticanonical: empty means derive automatically, otherwise the assertion text
HarbourneResult harbourne_check(const VanishingGoal& g, Demands& dm,
                                const std::string& anticanonical = {});
HarbourneResult harbourne_check(const VanishingGoal& g, const std::string& anticanonical = {});

VanishingGoal reduce_by_curve(const VanishingGoal& g, const std::vector<DivisorClass>& comps,
                              const LinearForm& N, Demands& dm);

VanishingGoal negexc_twist(const VanishingGoal& g, const std::string& point);
VanishingGoal forget_point(const VanishingGoal& g, const std::string& point);
VanishingGoal forget_zeros(const VanishingGoal& g);

// zero multiplicities on a P2 blow-up: H^1(P2, O(e)) = 0 for every e
bool pullback_vanishing(const VanishingGoal& g);
bool hirzebruch_vanishing(const VanishingGoal& g, Demands& dm);

struct Specialty {
    DivisorClass curve;
    LinearForm value;  // L.E
    Inequality condition;  // -(L.E) - 2 >= 0
};
std::vector<Specialty> detect_specialty(const DivisorClass& L, const std::vector<DivisorClass>& candidates,
                                        const ConstraintSet& cs, bool require_entailed = true);

// one step of a vanishing script; positions are 1-based in the current display order
struct ScriptStep {
    enum class Kind {
        Cremona, Rule, Forget, ForgetZeros, NegExc, Reduce, Expect, Harbourne, Pullback, Hirzebruch
    } kind;
    std::vector<int> points;          // cremona triple, rule anchors (0 = absent), forget list, negexc
    std::optional<CremonaCase> kase;  // absent: take what the configuration implies
    Rule rule = Rule::I;
    std::vector<std::string> curves;  // reduce components, class text
    std::string steps;                // reduce count, form text
    std::string text;                 // expect class, harbourne assertion, reduce irreducibility note
};

struct VanishingCertificate {
    VanishingGoal start;
    VanishingGoal final_goal;
    std::vector<std::string> steps;
    ConstraintSet required;
    std::string terminal;
};

VanishingCertificate run_script(const VanishingGoal& g, const std::vector<ScriptStep>& script, Demands& dm);

}  // namespace cmdeg
