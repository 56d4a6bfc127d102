#pragma once

#include "ava/toolproto/tool.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <string>

namespace ava {

// Exposes a tool on the wire protocol (see docs/protocol.md):
//   GET  /describe -> descriptor
//   POST /render   {"ava_proto": 1, "params": {...}} -> {"ava_proto": 1, "image": base64 PNG, "stats": ...}
// Bad requests get 400 {"ava_proto": 1, "error": {"code", "message"}}.
class ToolServer {
public:
    // Binds immediately and serves on a background thread. Port 0 picks a free port.
    // Throws BindError.
    ToolServer(VisTool& tool, const std::string& host = "127.0.0.1", int port = 0);
    ~ToolServer();
    ToolServer(const ToolServer&) = delete;
    ToolServer& operator=(const ToolServer&) = delete;

    int port() const noexcept;
    std::string endpoint() const;  // http://host:port
    void stop();
    // Blocks until stop() is called from another thread or a signal handler.
    void wait();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::unique_ptr<ToolServer> serve_tool(VisTool& tool, const std::string& host = "127.0.0.1", int port = 0);

// Client side of the protocol. Transport failures are retried once; a tool that
// still cannot be reached raises ToolUnreachable, a malformed or truncated reply
// ProtocolError. One request at a time per instance.
class HttpTool final : public VisTool {
public:
    explicit HttpTool(std::string endpoint, std::chrono::milliseconds timeout = std::chrono::seconds(30));
    ~HttpTool();

    ToolDescriptor describe() override;
    RenderResult render(const ParamVector& params) override;

    const std::string& endpoint() const noexcept { return endpoint_; }

private:
    struct Impl;
    std::string endpoint_;
    std::unique_ptr<Impl> impl_;
};

struct ClientRender {
    Image image;
    Bytes png;
    nlohmann::json stats;
};

ClientRender client_render(const std::string& endpoint, const ParamVector& params);

// "builtin:<name>" or an http(s):// endpoint.
std::unique_ptr<VisTool> open_tool(const std::string& spec, const nlohmann::json& options = {});

}  // namespace ava
