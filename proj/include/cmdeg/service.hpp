#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "cmdeg/plans.hpp"

namespace httplib {
class Server;
}

namespace cmdeg {

struct Session {
    std::string id;
    std::mutex mu;  // serializes actions
    ReplayState state;
    std::vector<ReplayState> undo_stack;
    std::optional<Plan> source;  // plan the session was advanced through
    json log = json::array();    // applied steps, replayable as a plan
};

class Service {
public:
    struct Response {
        int status = 200;
        json body;
    };

    Service();
    ~Service();

    Response create_session(const json& body);
    Response fiber(const std::string& id);
    Response bad_curves(const std::string& id);
    Response action(const std::string& id, const json& body);
    Response bound(const std::string& id);
    Response export_plan(const std::string& id);

    void mount(httplib::Server& srv);
    bool listen(const std::string& host, int port);
    int bind_any(const std::string& host);  // returns the port; pair with listen_after_bind()
    bool listen_after_bind();
    void stop();

private:
    std::shared_ptr<Session> find(const std::string& id);
    std::string fresh_id();

    std::mutex mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    unsigned long long counter_ = 0;
    std::unique_ptr<httplib::Server> server_;
};

json session_snapshot(const Session& s);

}  // namespace cmdeg
