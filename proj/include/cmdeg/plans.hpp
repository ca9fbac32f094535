#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmdeg/bounds.hpp"
#include "cmdeg/degen.hpp"

namespace cmdeg {

using json = nlohmann::json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PlanStep {
    std::string op;    // init | cremona | rule | modify | throw | glue | bound | assert
    std::string id;    // label for --until; defaults to "<op>-<index>"
    std::string cite;  // key into the citation index
    json body;
};

struct Plan {
    std::string name;
    int n = 10;
    std::vector<PlanStep> steps;
    std::string golden;  // golden file name, relative to the golden directory
};

Plan parse_plan(const json& j);
Plan load_plan(const std::string& name_or_path);

std::string data_dir();    // CMDEG_DATA_DIR env, else the source tree
std::string plans_dir();   // CMDEG_PLANS_DIR env, else <data>/plans
std::string golden_dir();  // CMDEG_GOLDEN_DIR env, else <data>/golden

struct StepFailure : std::runtime_error {
    size_t index;  // 1-based
    std::string id, cite;
    std::vector<Inequality> missing;
    StepFailure(size_t i, std::string sid, std::string c, const std::string& what, std::vector<Inequality> miss = {})
        : std::runtime_error("step " + std::to_string(i) + " (" + sid + ", cite " + c + "): " + what),
          index(i), id(std::move(sid)), cite(std::move(c)), missing(std::move(miss)) {}
};

struct Snapshot {
    size_t index = 0;
    std::string op, id, cite;
    CentralFiber fiber;
    std::vector<std::string> notes;
};

struct ReplayResult {
    std::vector<Snapshot> snapshots;
    std::optional<GlueResult> glue;
    std::optional<BoundReport> bound;
    mpz_class denominators = 1;  // lcm over every class of every snapshot and the throw coefficients
};

// until: a step id or a 1-based index; replay stops after that step
ReplayResult replay(const Plan& p, const std::optional<std::string>& until = std::nullopt);

// applies one non-init step to a state; shared with the service
struct ReplayState {
    CentralFiber fiber;
    std::optional<GlueResult> glue;
    std::optional<BoundReport> bound;
    ConstraintSet assumptions;
    mpz_class denominators = 1;
    int n = 10;
    std::vector<std::string> notes;
};
void apply_step(ReplayState& st, const PlanStep& s);
ReplayState replay_state(const Plan& p, const std::optional<std::string>& until = std::nullopt,
                         ReplayResult* out = nullptr);
CentralFiber init_fiber(const json& body, int* n_out = nullptr);

mpz_class fiber_denominators(const CentralFiber& f);

json fiber_json(const CentralFiber& f);
json bound_json(const BoundReport& r);
json glue_json(const GlueResult& g);
json replay_json(const ReplayResult& r);
std::string fiber_text(const CentralFiber& f);

// golden data
struct GoldenEntry {
    std::string step;
    std::string key;    // component id, or mu / bound / k
    std::string value;  // class text or rational
    int line = 0;
};
std::vector<GoldenEntry> load_golden(const std::string& path);
// one line per mismatch; empty means all match
std::vector<std::string> verify(const Plan& p, const ReplayResult& r, const std::vector<GoldenEntry>& golden);

// citation index: key -> {heading, quote}
struct Citation {
    std::string key, heading, quote;
};
std::vector<Citation> load_citations(const std::string& path = {});
std::vector<std::string> check_citations(const Plan& p, const std::vector<Citation>& index);

// vanishing scripts and throws in plan syntax
std::vector<ScriptStep> parse_script(const json& j);
ThrowSpec parse_throw(const json& j, const CentralFiber& f);
std::vector<std::vector<GlueItem>> parse_glue_order(const json& j);

}  // namespace cmdeg
