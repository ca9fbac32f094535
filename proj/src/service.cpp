#include "cmdeg/service.hpp"

#include <httplib.h>

#include <iomanip>
#include <random>
#include <sstream>

namespace cmdeg {

namespace {

const std::set<std::string> kActions = {"cremona", "rule", "modify", "throw", "glue", "bound", "assume", "undo", "assert"};

Service::Response error(int status, const std::string& kind, const std::string& detail,
                        const std::vector<Inequality>& missing = {}) {
    json m = json::array();
    for (auto& q : missing) m.push_back(q.str());
    return {status, {{"error", {{"kind", kind}, {"detail", detail}, {"missing", m}}}}};
}

json constraints_json(const ConstraintSet& cs) {
    json a = json::array();
    for (auto& q : cs.items()) a.push_back(q.str());
    return a;
}

}  // namespace

json session_snapshot(const Session& s) {
    json out = {{"session", s.id}, {"fiber", fiber_json(s.state.fiber)},
                {"assumptions", constraints_json(s.state.assumptions)}, {"undo_depth", s.undo_stack.size()}};
    out["glue"] = s.state.glue ? glue_json(*s.state.glue) : json(nullptr);
    out["bound"] = s.state.bound ? bound_json(*s.state.bound) : json(nullptr);
    out["notes"] = s.state.notes;
    return out;
}

Service::Service() = default;
Service::~Service() { stop(); }

std::string Service::fresh_id() {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::ostringstream o;
    o << std::hex << std::setw(16) << std::setfill('0') << rng() << std::setw(4) << (++counter_ & 0xffff);
    return o.str();
}

std::shared_ptr<Session> Service::find(const std::string& id) {
    std::lock_guard<std::mutex> g(mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

Service::Response Service::create_session(const json& body) {
    auto s = std::make_shared<Session>();
    try {
        if (!body.is_null() && !body.is_object()) return error(422, "schema", "body must be an object");
        if (body.contains("plan")) {
            if (!body["plan"].is_string() || body["plan"].get<std::string>().find('/') != std::string::npos)
                return error(422, "schema", "plan must be a shipped plan name");
            Plan p = load_plan(body["plan"].get<std::string>());
            std::optional<std::string> until;
            if (body.contains("until")) {
                if (!body["until"].is_string()) return error(422, "schema", "until must be a step id");
                until = body["until"].get<std::string>();
            }
            ReplayResult r;
            s->state = replay_state(p, until, &r);
            s->source = p;
            json init = {{"op", "init"}, {"from", p.name}, {"cite", p.steps.front().cite}};
            if (until) init["until"] = *until;
            s->log.push_back(init);
        } else {
            json init = body.is_object() ? body : json::object();
            s->state.fiber = init_fiber(init);
            s->state.denominators = fiber_denominators(s->state.fiber);
            s->log.push_back({{"op", "init"}, {"split", init.value("split", "4+6")}});
        }
    } catch (const StepFailure& e) {
        return error(422, "step_failure", e.what(), e.missing);
    } catch (const std::exception& e) {
        return error(422, "schema", e.what());
    }
    {
        std::lock_guard<std::mutex> g(mu_);
        s->id = fresh_id();
        sessions_[s->id] = s;
    }
    std::lock_guard<std::mutex> g(s->mu);
    return {201, session_snapshot(*s)};
}

Service::Response Service::fiber(const std::string& id) {
    auto s = find(id);
    if (!s) return error(404, "not_found", "unknown session " + id);
    std::lock_guard<std::mutex> g(s->mu);
    return {200, session_snapshot(*s)};
}

Service::Response Service::bad_curves(const std::string& id) {
    auto s = find(id);
    if (!s) return error(404, "not_found", "unknown session " + id);
    std::lock_guard<std::mutex> g(s->mu);
    json out = json::array();
    try {
        for (auto& b : find_bad_curves(s->state.fiber, s->state.assumptions)) {
            const Component& V = s->state.fiber.component(b.component);
            out.push_back({{"component", b.component}, {"curve", print_class(b.curve, &V.surface)},
                           {"value", b.value.str()}, {"requires", b.condition.str()}});
        }
    } catch (const std::exception& e) {
        return error(422, "engine", e.what());
    }
    return {200, {{"session", id}, {"assumptions", constraints_json(s->state.assumptions)}, {"bad_curves", out}}};
}

Service::Response Service::action(const std::string& id, const json& body) {
    auto s = find(id);
    if (!s) return error(404, "not_found", "unknown session " + id);
    std::lock_guard<std::mutex> g(s->mu);
    if (!body.is_object() || !body.contains("op") || !body["op"].is_string())
        return error(422, "schema", "action needs an op");
    std::string op = body["op"].get<std::string>();
    if (!kActions.count(op)) return error(422, "schema", "unknown action " + op);
    if (op == "undo") {
        if (s->undo_stack.empty()) return error(422, "empty_history", "nothing to undo");
        s->state = std::move(s->undo_stack.back());
        s->undo_stack.pop_back();
        s->log.erase(s->log.size() - 1);
        return {200, session_snapshot(*s)};
    }
    ReplayState next = s->state;
    next.notes.clear();
    json step = body;
    try {
        if (op == "assume") {
            if (!body.contains("inequalities") || !body["inequalities"].is_array())
                return error(422, "schema", "assume needs an inequalities array");
            ConstraintSet add;
            for (auto& q : body["inequalities"]) add.add(parse_inequality(q.get<std::string>()));
            ConstraintSet all = next.fiber.ambient;
            all.add_all(next.assumptions);
            all.add_all(add);
            if (!decide_feasible(all)) return error(422, "infeasible", "assumptions contradict the current constraints");
            next.assumptions.add_all(add);
        } else {
            if (op == "glue" && !body.contains("order")) {
                if (!s->source) return error(422, "schema", "glue needs an order");
                const PlanStep* gs = nullptr;
                for (auto& ps : s->source->steps)
                    if (ps.op == "glue") gs = &ps;
                if (!gs) return error(422, "schema", "glue needs an order");
                step["order"] = gs->body.at("order");
            }
            PlanStep ps{op, op, body.value("cite", std::string()), step};
            apply_step(next, ps);
        }
    } catch (const GlueFailure& e) {
        return error(422, "missing_inequality", e.what(), e.missing);
    } catch (const VanishFailure& e) {
        return error(422, "missing_inequality", e.what(), e.missing);
    } catch (const BoundError& e) {
        return error(422, "bound", e.what());
    } catch (const std::invalid_argument& e) {
        return error(422, "pattern_mismatch", e.what());
    } catch (const std::exception& e) {
        return error(422, "engine", e.what());
    }
    s->undo_stack.push_back(std::move(s->state));
    s->state = std::move(next);
    s->log.push_back(step);
    return {200, session_snapshot(*s)};
}

Service::Response Service::bound(const std::string& id) {
    auto s = find(id);
    if (!s) return error(404, "not_found", "unknown session " + id);
    std::lock_guard<std::mutex> g(s->mu);
    if (!s->state.glue) return error(422, "no_glue", "run a glue action before asking for a bound");
    ConstraintSet cs = s->state.fiber.ambient;
    cs.add_all(s->state.glue->required);
    cs.add_all(s->state.assumptions);
    try {
        return {200, bound_json(compute_bound(cs, s->state.n, s->state.denominators))};
    } catch (const std::exception& e) {
        return error(422, "bound", e.what());
    }
}

Service::Response Service::export_plan(const std::string& id) {
    auto s = find(id);
    if (!s) return error(404, "not_found", "unknown session " + id);
    std::lock_guard<std::mutex> g(s->mu);
    json steps = json::array();
    for (size_t i = 0; i < s->log.size(); ++i) {
        json st = s->log[i];
        st["id"] = st["op"].get<std::string>() + "-" + std::to_string(i + 1);
        if (st["op"] == "assume") {
            st = {{"op", "assert"}, {"id", st["id"]}, {"kind", "assume"}, {"cite", "session-assumption"},
                  {"inequalities", st["inequalities"]}};
        }
        steps.push_back(st);
    }
    return {200, {{"name", "session-" + id}, {"n", s->state.n}, {"steps", steps}}};
}

void Service::mount(httplib::Server& srv) {
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    auto parse_body = [](const httplib::Request& req, json& out) {
        if (req.body.empty()) {
            out = json::object();
            return true;
        }
        try {
            out = json::parse(req.body);
            return true;
        } catch (const json::parse_error&) {
            return false;
        }
    };
    srv.Post("/sessions", [=, this](const httplib::Request& req, httplib::Response& res) {
        json b;
        if (!parse_body(req, b)) return reply(res, error(422, "schema", "body is not JSON"));
        reply(res, create_session(b));
    });
    srv.Get(R"(/sessions/([^/]+)/fiber)", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, fiber(req.matches[1]));
    });
    srv.Get(R"(/sessions/([^/]+)/bad-curves)", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, bad_curves(req.matches[1]));
    });
    srv.Get(R"(/sessions/([^/]+)/bound)", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, bound(req.matches[1]));
    });
    srv.Get(R"(/sessions/([^/]+)/plan)", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, export_plan(req.matches[1]));
    });
    srv.Post(R"(/sessions/([^/]+)/actions)", [=, this](const httplib::Request& req, httplib::Response& res) {
        json b;
        if (!parse_body(req, b)) return reply(res, error(422, "schema", "body is not JSON"));
        reply(res, action(req.matches[1], b));
    });
}

bool Service::listen(const std::string& host, int port) {
    server_ = std::make_unique<httplib::Server>();
    mount(*server_);
    return server_->listen(host, port);
}

int Service::bind_any(const std::string& host) {
    server_ = std::make_unique<httplib::Server>();
    mount(*server_);
    return server_->bind_to_any_port(host);
}

bool Service::listen_after_bind() { return server_ && server_->listen_after_bind(); }

void Service::stop() {
    if (server_) server_->stop();
}

}  // namespace cmdeg
