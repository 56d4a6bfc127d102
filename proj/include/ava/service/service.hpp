#pragma once

#include "ava/core/config.hpp"
#include "ava/core/session.hpp"
#include "ava/core/store.hpp"
#include "ava/errors.hpp"
#include "ava/params.hpp"
#include "ava/perception/chat_client.hpp"
#include "ava/toolproto/tool.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace ava {

class UnknownSession : public Error {
public:
    explicit UnknownSession(const std::string& id) : Error("unknown_session", "no session " + id) {}
};

struct CreateSessionRequest {
    AgentConfig config;
    std::string goal;
    std::string tool;  // builtin:<name> or http(s) endpoint
    nlohmann::json tool_options = nlohmann::json::object();
};

CreateSessionRequest create_session_request_from_json(const nlohmann::json& j);

struct ControlCommand {
    enum class Kind { pause, resume, abort, override_params, amend_goal };
    Kind kind = Kind::pause;
    ParamVector params;  // override_params
    std::string goal;    // amend_goal
};

// {"command": "pause"|"resume"|"abort"|"override_params"|"amend_goal", "params": {...}, "goal": "..."}
ControlCommand control_command_from_json(const nlohmann::json& j);

// One entry of a session's event log. Kind "record" carries an IterationRecord,
// kind "status" carries {"status", "reason"?, "final_params"?}.
struct SessionEvent {
    std::size_t seq = 0;
    std::string kind;
    nlohmann::json data;
};

std::string format_sse(const SessionEvent& event);

// Owns every session of one service instance: persistence under data_dir, one
// worker thread per live session, and an append-only event log per session.
class SessionManager {
public:
    using ToolFactory = std::function<std::unique_ptr<VisTool>(const std::string&, const nlohmann::json&)>;
    using BackendFactory = std::function<std::unique_ptr<ChatBackend>()>;

    struct Options {
        std::filesystem::path data_dir;
        ToolFactory tool_factory;        // defaults to open_tool
        BackendFactory backend_factory;  // defaults to a ChatClient configured from the environment
    };

    // Recovers stored sessions; any that were still live become failed("interrupted").
    explicit SessionManager(Options options);
    ~SessionManager();
    SessionManager(const SessionManager&) = delete;
    SessionManager& operator=(const SessionManager&) = delete;

    // Throws InvalidConfig for a bad config or tool spec, ToolUnreachable or
    // ProtocolError when the tool cannot be described. Nothing is stored on failure.
    std::string create(const CreateSessionRequest& request);

    Session get(const std::string& id) const;  // throws UnknownSession
    std::vector<std::string> ids() const;

    // Applied at the next iteration boundary. pause returns once no further render
    // can start; abort returns once the worker has stopped. Throws InvalidTransition.
    SessionStatus control(const std::string& id, const ControlCommand& command);

    // Event `index` of the session's log, waiting up to `timeout` for it to appear.
    // nullopt with *closed set means the log ended before `index`.
    std::optional<SessionEvent> next_event(const std::string& id, std::size_t index,
                                           std::chrono::milliseconds timeout, bool* closed) const;

    // Blocks until the session reaches a terminal status or the timeout passes.
    bool wait_terminal(const std::string& id, std::chrono::milliseconds timeout) const;

    ImageStore& images() noexcept { return store_.images(); }

    // Aborts live sessions and joins their workers. Idempotent.
    void shutdown();

private:
    struct Entry;
    std::shared_ptr<Entry> entry(const std::string& id) const;
    void run_worker(std::shared_ptr<Entry> e);

    Options options_;
    SessionStore store_;
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Entry>> sessions_;
    bool shutting_down_ = false;
};

// HTTP front end:
//   POST /sessions                 -> 201 {"id"}; 422 invalid config; 502 tool unreachable
//   GET  /sessions                 -> {"sessions": [ids]}
//   GET  /sessions/{id}            -> session JSON; 404
//   GET  /sessions/{id}/events     -> text/event-stream, replay then live; 404
//   POST /sessions/{id}/control    -> {"status"}; 409 invalid transition; 404
//   GET  /images/{hash}            -> image/png; 404
class SessionServer {
public:
    SessionServer(SessionManager& manager, const std::string& host = "127.0.0.1", int port = 0);
    ~SessionServer();
    SessionServer(const SessionServer&) = delete;
    SessionServer& operator=(const SessionServer&) = delete;

    int port() const noexcept;
    std::string endpoint() const;
    void stop();
    void wait();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Data directory from AVA_DATA_DIR, falling back to ./ava-data.
std::filesystem::path data_dir_from_env();

}  // namespace ava
