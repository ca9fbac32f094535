#include <CLI11.hpp>

#include <iostream>

#include "cmdeg/plans.hpp"
#include "cmdeg/service.hpp"

using namespace cmdeg;

namespace {

enum Exit { kOk = 0, kMismatch = 1, kStepFailure = 2, kSchema = 3 };

void print_replay(const ReplayResult& r, bool as_json) {
    if (as_json) {
        std::cout << replay_json(r).dump(2) << "\n";
        return;
    }
    for (auto& s : r.snapshots) {
        std::cout << "== step " << s.index << " " << s.id << " (" << s.op << ")\n";
        for (auto& n : s.notes) std::cout << "   " << n << "\n";
        std::cout << fiber_text(s.fiber);
    }
    if (r.bound) std::cout << "== bound\n" << summary(*r.bound);
}

int verify_plan(const std::string& name) {
    Plan p = load_plan(name);
    if (p.golden.empty()) throw SchemaError("plan " + p.name + " has no golden file");
    auto golden = load_golden(golden_dir() + "/" + p.golden);
    auto r = replay(p);
    auto diffs = verify(p, r, golden);
    for (auto& d : diffs) std::cout << p.name << ": " << d << "\n";
    if (diffs.empty()) std::cout << p.name << ": all " << golden.size() << " golden entries match\n";
    return diffs.empty() ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cmdeg: degenerations of the plane blown up in points"};
    app.require_subcommand(1);

    std::string plan, until, at;
    bool as_json = false;
    std::vector<std::string> plans, assume;
    int port = 8080;
    std::string host = "127.0.0.1";

    auto* rp = app.add_subcommand("replay", "replay a plan and print the fibre after each step");
    rp->add_option("plan", plan, "plan name or path")->required();
    rp->add_option("--until", until, "stop after this step id or index");
    rp->add_flag("--json", as_json, "print snapshots as JSON");

    auto* vf = app.add_subcommand("verify", "compare a replay with the golden tables");
    vf->add_option("plans", plans, "plan names or paths");
    bool all = false;
    vf->add_flag("--all", all, "verify every shipped plan");

    auto* bd = app.add_subcommand("bound", "replay a plan and print its bound report");
    bd->add_option("plan", plan, "plan name or path")->required();
    bd->add_flag("--json", as_json, "print the report as JSON");

    auto* sb = app.add_subcommand("search-bad", "list (-1)-curves that may obstruct vanishing");
    sb->add_option("plan", plan, "plan name or path")->required();
    sb->add_option("--at", at, "step id or index")->required();
    sb->add_option("--assume", assume, "extra inequality, e.g. \"3d < 10m\"");

    auto* sv = app.add_subcommand("serve", "run the session HTTP service");
    sv->add_option("--port", port, "port")->envname("CMDEG_PORT");
    sv->add_option("--host", host, "bind address")->envname("CMDEG_HOST");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*rp) {
            std::optional<std::string> u;
            if (!until.empty()) u = until;
            print_replay(replay(load_plan(plan), u), as_json);
        } else if (*vf) {
            if (all) plans = {"first", "second", "third", "fourth", "fifth"};
            if (plans.empty()) throw SchemaError("verify needs a plan or --all");
            int rc = kOk;
            for (auto& p : plans) rc = std::max(rc, verify_plan(p));
            return rc;
        } else if (*bd) {
            auto r = replay(load_plan(plan));
            if (!r.bound) throw SchemaError("plan has no bound step");
            if (as_json)
                std::cout << bound_json(*r.bound).dump(2) << "\n";
            else
                std::cout << summary(*r.bound);
        } else if (*sb) {
            auto st = replay_state(load_plan(plan), at);
            ConstraintSet extra;
            for (auto& q : assume) extra.add(parse_inequality(q));
            auto bad = find_bad_curves(st.fiber, extra);
            for (auto& b : bad)
                std::cout << b.component << ": " << print_class(b.curve, &st.fiber.component(b.component).surface)
                          << "  L.E = " << b.value.str() << "  needs " << b.condition.str() << "\n";
            if (bad.empty()) std::cout << "no candidate curves\n";
        } else if (*sv) {
            Service svc;
            std::cout << "listening on " << host << ":" << port << "\n" << std::flush;
            return svc.listen(host, port) ? kOk : kStepFailure;
        }
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kSchema;
    } catch (const StepFailure& e) {
        std::cerr << "step failure: " << e.what() << "\n";
        for (auto& q : e.missing) std::cerr << "  missing: " << q.str() << "\n";
        return kStepFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kStepFailure;
    }
    return kOk;
}
