#include "ava/service/service.hpp"

#include "ava/core/agent.hpp"
#include "ava/core/control.hpp"
#include "ava/core/loop.hpp"
#include "ava/errors.hpp"
#include "ava/toolproto/http.hpp"

#include <httplib.h>

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <thread>

namespace ava {

CreateSessionRequest create_session_request_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidConfig("request must be an object");
    CreateSessionRequest r;
    try {
        if (!j.contains("config") || !j["config"].is_object()) throw InvalidConfig("request needs a config object");
        r.config = agent_config_from_json(j["config"]);
        r.goal = j.value("goal", std::string());
        r.tool = j.value("tool", std::string());
        if (j.contains("tool_options")) r.tool_options = j["tool_options"];
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("bad session request: ") + e.what());
    }
    if (r.goal.empty()) throw InvalidConfig("request needs a non-empty goal");
    if (r.tool.empty()) throw InvalidConfig("request needs a tool");
    return r;
}

ControlCommand control_command_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("command") || !j["command"].is_string()) {
        throw InvalidParams("control request needs a command");
    }
    ControlCommand c;
    const auto name = j["command"].get<std::string>();
    if (name == "pause") {
        c.kind = ControlCommand::Kind::pause;
    } else if (name == "resume") {
        c.kind = ControlCommand::Kind::resume;
    } else if (name == "abort") {
        c.kind = ControlCommand::Kind::abort;
    } else if (name == "override_params") {
        c.kind = ControlCommand::Kind::override_params;
        if (!j.contains("params") || !j["params"].is_object()) throw InvalidParams("override_params needs params");
        c.params = param_vector_from_json(j["params"]);
    } else if (name == "amend_goal") {
        c.kind = ControlCommand::Kind::amend_goal;
        c.goal = j.value("goal", std::string());
    } else {
        throw InvalidParams("unknown command " + name);
    }
    return c;
}

std::string format_sse(const SessionEvent& event) {
    return "id: " + std::to_string(event.seq) + "\nevent: " + event.kind + "\ndata: " + event.data.dump() + "\n\n";
}

namespace {

nlohmann::json status_payload(const Session& s) {
    nlohmann::json j{{"status", to_string(s.status)}};
    if (!s.status_reason.empty()) j["reason"] = s.status_reason;
    if (s.final_params) j["final_params"] = to_json(*s.final_params);
    return j;
}

constexpr auto kLongWait = std::chrono::minutes(10);

}  // namespace

struct SessionManager::Entry {
    mutable std::mutex mu;
    mutable std::condition_variable cv;
    Session snapshot;
    std::vector<SessionEvent> events;
    bool closed = false;

    std::mutex command_mu;  // one operator command at a time
    SessionControl control;
    CreateSessionRequest request;
    std::unique_ptr<VisTool> tool;
    AgentParts agent;
    std::thread worker;

    // Caller holds mu.
    void push(std::string kind, nlohmann::json data) {
        events.push_back(SessionEvent{events.size(), std::move(kind), std::move(data)});
        cv.notify_all();
    }
};

SessionManager::SessionManager(Options options) : options_(std::move(options)), store_(options_.data_dir) {
    if (!options_.tool_factory) {
        options_.tool_factory = [](const std::string& spec, const nlohmann::json& o) { return open_tool(spec, o); };
    }
    for (auto& s : store_.load_all()) {
        if (!is_terminal(s.status)) {
            s.status = SessionStatus::failed;
            s.status_reason = "interrupted";
            store_.save(s);
        }
        auto e = std::make_shared<Entry>();
        for (const auto& r : s.records) e->push("record", to_json(r));
        e->push("status", status_payload(s));
        e->closed = true;
        e->snapshot = std::move(s);
        sessions_[e->snapshot.id] = e;
    }
}

SessionManager::~SessionManager() { shutdown(); }

std::string SessionManager::create(const CreateSessionRequest& request) {
    validate(request.config);
    auto e = std::make_shared<Entry>();
    e->request = request;
    e->tool = options_.tool_factory(request.tool, request.tool_options);
    const ToolDescriptor descriptor = e->tool->describe();
    e->agent = make_agent(request.config,
                          request.config.perception_kind == PerceptionKind::llm && options_.backend_factory
                              ? options_.backend_factory()
                              : nullptr);

    std::lock_guard lock(mu_);
    if (shutting_down_) throw Error("shutting_down", "service is shutting down");
    const std::string base = derive_session_id(request.config, request.goal, descriptor);
    std::string id = base;
    for (int n = 2; sessions_.count(id) || std::filesystem::exists(store_.path_for(id)); ++n) {
        id = base + "-" + std::to_string(n);
    }
    e->snapshot.id = id;
    e->snapshot.goal = request.goal;
    e->snapshot.config = request.config;
    e->snapshot.status = SessionStatus::running;
    store_.save(e->snapshot);
    e->push("status", status_payload(e->snapshot));
    sessions_[id] = e;
    e->worker = std::thread([this, e] { run_worker(e); });
    return id;
}

void SessionManager::run_worker(std::shared_ptr<Entry> e) {
    LoopOptions lo;
    lo.session_id = e->snapshot.id;
    lo.images = &store_.images();
    lo.control = &e->control;
    lo.on_record = [this, &e](const Session& s, const IterationRecord& record) {
        std::lock_guard lock(e->mu);
        e->snapshot.goal = s.goal;
        e->snapshot.records = s.records;
        e->snapshot.token_usage = s.token_usage;
        store_.save(e->snapshot);
        e->push("record", to_json(record));
    };

    Session result;
    try {
        result = run_loop(e->request.config, e->request.goal, *e->tool, *e->agent.perception, *e->agent.planner, lo);
    } catch (const std::exception& ex) {
        std::lock_guard lock(e->mu);
        result = e->snapshot;
        result.status = SessionStatus::failed;
        result.status_reason = ex.what();
    }
    e->control.finish();

    bool stopping;
    {
        std::lock_guard lock(mu_);
        stopping = shutting_down_;
    }
    std::lock_guard lock(e->mu);
    if (stopping && result.status == SessionStatus::failed && result.status_reason == "aborted") {
        result.status_reason = "interrupted";
    }
    e->snapshot = std::move(result);
    store_.save(e->snapshot);
    e->push("status", status_payload(e->snapshot));
    e->closed = true;
}

std::shared_ptr<SessionManager::Entry> SessionManager::entry(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw UnknownSession(id);
    return it->second;
}

Session SessionManager::get(const std::string& id) const {
    auto e = entry(id);
    std::lock_guard lock(e->mu);
    return e->snapshot;
}

std::vector<std::string> SessionManager::ids() const {
    std::lock_guard lock(mu_);
    std::vector<std::string> out;
    for (const auto& [id, _] : sessions_) out.push_back(id);
    return out;
}

SessionStatus SessionManager::control(const std::string& id, const ControlCommand& command) {
    auto e = entry(id);
    std::lock_guard command_lock(e->command_mu);
    {
        std::lock_guard lock(e->mu);
        if (e->closed) throw InvalidTransition("session " + id + " has ended");
    }
    switch (command.kind) {
        case ControlCommand::Kind::pause: {
            e->control.pause();
            // The worker may be mid-iteration; the pause is acknowledged once it parks.
            e->control.wait_quiescent(kLongWait);
            std::lock_guard lock(e->mu);
            if (!e->closed && e->control.state() == SessionControl::State::paused) {
                e->snapshot.status = SessionStatus::paused;
                store_.save(e->snapshot);
                e->push("status", status_payload(e->snapshot));
            }
            return e->snapshot.status;
        }
        case ControlCommand::Kind::resume: {
            // Pushed before the worker wakes so the event precedes any new record.
            std::lock_guard lock(e->mu);
            e->control.resume();
            e->snapshot.status = SessionStatus::running;
            store_.save(e->snapshot);
            e->push("status", status_payload(e->snapshot));
            return e->snapshot.status;
        }
        case ControlCommand::Kind::override_params:
            e->control.override_params(command.params);
            return get(id).status;
        case ControlCommand::Kind::amend_goal:
            e->control.amend_goal(command.goal);
            return get(id).status;
        case ControlCommand::Kind::abort: {
            e->control.abort();
            std::unique_lock lock(e->mu);
            e->cv.wait_for(lock, kLongWait, [&] { return e->closed; });
            return e->snapshot.status;
        }
    }
    throw InvalidTransition("unknown command");
}

std::optional<SessionEvent> SessionManager::next_event(const std::string& id, std::size_t index,
                                                       std::chrono::milliseconds timeout, bool* closed) const {
    auto e = entry(id);
    std::unique_lock lock(e->mu);
    e->cv.wait_for(lock, timeout, [&] { return index < e->events.size() || e->closed; });
    if (closed) *closed = e->closed && index >= e->events.size();
    if (index < e->events.size()) return e->events[index];
    return std::nullopt;
}

bool SessionManager::wait_terminal(const std::string& id, std::chrono::milliseconds timeout) const {
    auto e = entry(id);
    std::unique_lock lock(e->mu);
    return e->cv.wait_for(lock, timeout, [&] { return e->closed; });
}

void SessionManager::shutdown() {
    std::vector<std::shared_ptr<Entry>> live;
    {
        std::lock_guard lock(mu_);
        shutting_down_ = true;
        for (auto& [_, e] : sessions_) {
            if (e->worker.joinable()) live.push_back(e);
        }
    }
    for (auto& e : live) {
        try {
            e->control.abort();
        } catch (const InvalidTransition&) {
        }
        e->worker.join();
    }
}

namespace {

void reply_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
    res.status = status;
    res.set_content(nlohmann::json{{"error", {{"code", code}, {"message", message}}}}.dump(), "application/json");
}

std::optional<nlohmann::json> parse_body(const httplib::Request& req, httplib::Response& res) {
    try {
        return nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception& e) {
        reply_error(res, 400, "malformed_json", e.what());
        return std::nullopt;
    }
}

bool is_hex_hash(const std::string& s) {
    return !s.empty() && s.size() <= 128 &&
           s.find_first_not_of("0123456789abcdef") == std::string::npos;
}

}  // namespace

struct SessionServer::Impl {
    SessionManager& manager;
    std::string host;
    int port = 0;
    httplib::Server server;
    std::thread thread;
    std::atomic<bool> stopped{false};

    explicit Impl(SessionManager& m) : manager(m) {}
};

SessionServer::SessionServer(SessionManager& manager, const std::string& host, int port)
    : impl_(std::make_unique<Impl>(manager)) {
    auto& svr = impl_->server;
    auto* impl = impl_.get();

    svr.set_default_headers({{"Access-Control-Allow-Origin", "*"}});

    svr.Post("/sessions", [impl](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req, res);
        if (!body) return;
        try {
            const auto id = impl->manager.create(create_session_request_from_json(*body));
            res.status = 201;
            res.set_content(nlohmann::json{{"id", id}}.dump(), "application/json");
        } catch (const InvalidConfig& e) {
            reply_error(res, 422, e.code(), e.what());
        } catch (const ToolUnreachable& e) {
            reply_error(res, 502, e.code(), e.what());
        } catch (const ProtocolError& e) {
            reply_error(res, 502, e.protocol_code(), e.what());
        } catch (const Error& e) {
            reply_error(res, 500, e.code(), e.what());
        }
    });

    svr.Get("/sessions", [impl](const httplib::Request&, httplib::Response& res) {
        res.set_content(nlohmann::json{{"sessions", impl->manager.ids()}}.dump(), "application/json");
    });

    svr.Get(R"(/sessions/([^/]+))", [impl](const httplib::Request& req, httplib::Response& res) {
        try {
            res.set_content(serialize_session(impl->manager.get(req.matches[1])), "application/json");
        } catch (const UnknownSession& e) {
            reply_error(res, 404, e.code(), e.what());
        }
    });

    svr.Get(R"(/sessions/([^/]+)/events)", [impl](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1];
        try {
            impl->manager.get(id);
        } catch (const UnknownSession& e) {
            return reply_error(res, 404, e.code(), e.what());
        }
        // Reconnecting clients resume after the last event they saw.
        auto next = std::make_shared<std::size_t>(0);
        if (req.has_header("Last-Event-ID")) {
            try {
                *next = std::stoul(req.get_header_value("Last-Event-ID")) + 1;
            } catch (const std::exception&) {
            }
        }
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider("text/event-stream", [impl, id, next](std::size_t, httplib::DataSink& sink) {
            if (impl->stopped) {
                sink.done();
                return true;
            }
            bool closed = false;
            auto event = impl->manager.next_event(id, *next, std::chrono::milliseconds(200), &closed);
            if (event) {
                const auto text = format_sse(*event);
                if (!sink.write(text.data(), text.size())) return false;
                ++*next;
            } else if (closed) {
                sink.done();
            } else if (!sink.is_writable()) {
                return false;
            }
            return true;
        });
    });

    svr.Post(R"(/sessions/([^/]+)/control)", [impl](const httplib::Request& req, httplib::Response& res) {
        auto body = parse_body(req, res);
        if (!body) return;
        try {
            const auto status = impl->manager.control(req.matches[1], control_command_from_json(*body));
            res.set_content(nlohmann::json{{"status", to_string(status)}}.dump(), "application/json");
        } catch (const UnknownSession& e) {
            reply_error(res, 404, e.code(), e.what());
        } catch (const InvalidTransition& e) {
            reply_error(res, 409, e.code(), e.what());
        } catch (const Error& e) {
            reply_error(res, 400, e.code(), e.what());
        }
    });

    svr.Get(R"(/images/([^/]+?)(?:\.png)?)", [impl](const httplib::Request& req, httplib::Response& res) {
        const std::string hash = req.matches[1];
        std::optional<Bytes> png;
        if (is_hex_hash(hash)) png = impl->manager.images().get(hash);
        if (!png) return reply_error(res, 404, "unknown_image", "no image " + hash);
        res.set_header("Cache-Control", "public, max-age=31536000, immutable");
        res.set_content(std::string(png->begin(), png->end()), "image/png");
    });

    impl_->host = host;
    if (port == 0) {
        impl_->port = svr.bind_to_any_port(host);
        if (impl_->port < 0) throw BindError("cannot bind " + host);
    } else {
        if (!svr.bind_to_port(host, port)) throw BindError("cannot bind " + host + ":" + std::to_string(port));
        impl_->port = port;
    }
    impl_->thread = std::thread([impl] { impl->server.listen_after_bind(); });
    svr.wait_until_ready();
}

SessionServer::~SessionServer() { stop(); }

int SessionServer::port() const noexcept { return impl_->port; }

std::string SessionServer::endpoint() const { return "http://" + impl_->host + ":" + std::to_string(impl_->port); }

void SessionServer::stop() {
    impl_->stopped = true;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

void SessionServer::wait() {
    while (!impl_->stopped) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

std::filesystem::path data_dir_from_env() {
    if (const char* dir = std::getenv("AVA_DATA_DIR"); dir && *dir) return dir;
    return "ava-data";
}

}  // namespace ava
