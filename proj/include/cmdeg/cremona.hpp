#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cmdeg/picard.hpp"

namespace cmdeg {

enum class CremonaCase { Distinct, OneInfinitelyNear, Chain };
std::string case_name(CremonaCase c);
CremonaCase parse_case(const std::string& s);

// explicit rewrite of one point's annotations after a move
struct AnnotationEdit {
    std::string point;
    std::optional<std::optional<std::string>> parent;
    std::optional<std::optional<std::string>> directed_to;
};

struct CremonaMove {
    std::array<std::string, 3> base_points;
    CremonaCase kase = CremonaCase::Distinct;
    std::vector<AnnotationEdit> script;
};

// coefficient formula only, at display positions (i, j, k)
DivisorClass apply_cremona(const DivisorClass& L, const std::array<size_t, 3>& idx);

// the case the configuration's annotations imply for a triple; throws on bad ids
CremonaCase classify(const Configuration& c, const std::array<std::string, 3>& pts);

// validates the move against the configuration, rewrites every class and the annotations
void apply_move(Configuration& c, std::vector<DivisorClass>& classes, const CremonaMove& mv);

enum class Rule { I, II, III };
Rule parse_rule(const std::string& s);

// anchors p1..p5 by point id; Rule I accepts p1 or p5 absent
void apply_rule(Configuration& c, std::vector<DivisorClass>& classes, Rule r,
                const std::array<std::optional<std::string>, 5>& anchors);

// same formula on a constant class (e.g. an intersection curve)
DivisorClass transform_incident_curve(const DivisorClass& C, const Configuration& c,
                                      const CremonaMove& mv);

}  // namespace cmdeg
