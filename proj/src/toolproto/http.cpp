#include "ava/toolproto/http.hpp"

#include "ava/errors.hpp"
#include "ava/toolproto/builtin.hpp"

#include <httplib.h>

#include <atomic>
#include <thread>

namespace ava {

namespace {

nlohmann::json error_body(const std::string& code, const std::string& message) {
    return {{"ava_proto", kProtocolVersion}, {"error", {{"code", code}, {"message", message}}}};
}

void reply_error(httplib::Response& res, int status, const std::string& code, const std::string& message) {
    res.status = status;
    res.set_content(error_body(code, message).dump(), "application/json");
}

}  // namespace

struct ToolServer::Impl {
    VisTool& tool;
    std::string host;
    int port = 0;
    httplib::Server server;
    std::thread thread;
    std::atomic<bool> stopped{false};

    explicit Impl(VisTool& t) : tool(t) {}
};

ToolServer::ToolServer(VisTool& tool, const std::string& host, int port) : impl_(std::make_unique<Impl>(tool)) {
    auto& svr = impl_->server;
    // Described once up front: render requests are validated against this space.
    const ToolDescriptor descriptor = tool.describe();
    const std::string describe_body = to_json(descriptor).dump();

    svr.Get("/describe", [describe_body](const httplib::Request&, httplib::Response& res) {
        res.set_content(describe_body, "application/json");
    });
    svr.Post("/render", [this, descriptor](const httplib::Request& req, httplib::Response& res) {
        nlohmann::json body;
        try {
            body = nlohmann::json::parse(req.body);
        } catch (const nlohmann::json::exception& e) {
            return reply_error(res, 400, "malformed_json", e.what());
        }
        if (!body.is_object()) return reply_error(res, 400, "malformed_json", "request body must be an object");
        if (body.contains("ava_proto") && body["ava_proto"] != kProtocolVersion) {
            return reply_error(res, 400, "unsupported_version", "this tool speaks ava_proto 1");
        }
        if (!body.contains("params") || !body["params"].is_object()) {
            return reply_error(res, 400, "missing_params", "request needs a params object");
        }
        ParamVector params;
        try {
            params = param_vector_from_json(body["params"]);
        } catch (const std::exception& e) {
            return reply_error(res, 400, "bad_param_type", e.what());
        }
        if (auto v = check_params(descriptor.param_space, params)) {
            return reply_error(res, 400, v->code, v->message);
        }
        RenderResult r;
        try {
            r = impl_->tool.render(params);
        } catch (const ProtocolError& e) {
            return reply_error(res, 400, e.protocol_code(), e.what());
        } catch (const std::exception& e) {
            return reply_error(res, 500, "render_failed", e.what());
        }
        nlohmann::json out{{"ava_proto", kProtocolVersion}, {"image", base64_encode(r.png)}};
        if (!r.stats.is_null()) out["stats"] = std::move(r.stats);
        res.set_content(out.dump(), "application/json");
    });

    impl_->host = host;
    if (port == 0) {
        impl_->port = svr.bind_to_any_port(host);
        if (impl_->port < 0) throw BindError("cannot bind " + host);
    } else {
        if (!svr.bind_to_port(host, port)) throw BindError("cannot bind " + host + ":" + std::to_string(port));
        impl_->port = port;
    }
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    // stop() before the listener starts would leave it running forever.
    svr.wait_until_ready();
}

ToolServer::~ToolServer() { stop(); }

int ToolServer::port() const noexcept { return impl_->port; }

std::string ToolServer::endpoint() const { return "http://" + impl_->host + ":" + std::to_string(impl_->port); }

void ToolServer::stop() {
    impl_->stopped = true;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

void ToolServer::wait() {
    while (!impl_->stopped) std::this_thread::sleep_for(std::chrono::milliseconds(100));
}

std::unique_ptr<ToolServer> serve_tool(VisTool& tool, const std::string& host, int port) {
    return std::make_unique<ToolServer>(tool, host, port);
}

struct HttpTool::Impl {
    httplib::Client client;
    std::optional<ToolDescriptor> descriptor;

    explicit Impl(const std::string& endpoint) : client(endpoint) {}

    template <class Call>
    httplib::Result with_retry(Call call, const std::string& what) {
        auto res = call();
        if (!res) res = call();
        if (!res) {
            const auto err = res.error();
            if (err == httplib::Error::Connection || err == httplib::Error::ConnectionTimeout ||
                err == httplib::Error::BindIPAddress) {
                throw ToolUnreachable(what + ": " + httplib::to_string(err));
            }
            throw ProtocolError("truncated_payload", what + ": " + httplib::to_string(err));
        }
        return res;
    }
};

HttpTool::HttpTool(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), impl_(std::make_unique<Impl>(endpoint_)) {
    if (!impl_->client.is_valid()) throw ToolUnreachable("invalid tool endpoint " + endpoint_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout - secs);
    impl_->client.set_connection_timeout(secs.count(), usecs.count());
    impl_->client.set_read_timeout(secs.count(), usecs.count());
    impl_->client.set_write_timeout(secs.count(), usecs.count());
}

HttpTool::~HttpTool() = default;

namespace {

nlohmann::json parse_reply(const httplib::Result& res) {
    nlohmann::json body;
    try {
        body = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError("malformed_response", std::string("unparsable reply: ") + e.what());
    }
    if (res->status != 200) {
        std::string code = "http_" + std::to_string(res->status);
        std::string message = "tool replied " + std::to_string(res->status);
        if (body.is_object() && body.contains("error") && body["error"].is_object()) {
            code = body["error"].value("code", code);
            message = body["error"].value("message", message);
        }
        throw ProtocolError(code, message);
    }
    if (!body.is_object()) throw ProtocolError("malformed_response", "reply is not an object");
    return body;
}

}  // namespace

ToolDescriptor HttpTool::describe() {
    auto res = impl_->with_retry([&] { return impl_->client.Get("/describe"); }, endpoint_ + "/describe");
    impl_->descriptor = tool_descriptor_from_json(parse_reply(res));
    return *impl_->descriptor;
}

RenderResult HttpTool::render(const ParamVector& params) {
    const nlohmann::json request{{"ava_proto", kProtocolVersion}, {"params", to_json(params)}};
    const std::string payload = request.dump();
    auto res = impl_->with_retry([&] { return impl_->client.Post("/render", payload, "application/json"); },
                                 endpoint_ + "/render");
    const auto body = parse_reply(res);
    if (body.value("ava_proto", 0) != kProtocolVersion) {
        throw ProtocolError("unsupported_version", "reply does not speak ava_proto 1");
    }
    if (!body.contains("image") || !body["image"].is_string()) {
        throw ProtocolError("malformed_response", "reply has no image");
    }
    RenderResult out;
    try {
        out.png = base64_decode(body["image"].get<std::string>());
        decode_png(out.png);
    } catch (const Error& e) {
        throw ProtocolError("truncated_payload", std::string("image payload does not decode: ") + e.what());
    }
    if (body.contains("stats")) out.stats = body["stats"];
    return out;
}

ClientRender client_render(const std::string& endpoint, const ParamVector& params) {
    HttpTool tool(endpoint);
    auto r = tool.render(params);
    ClientRender out;
    out.image = decode_png(r.png);
    out.png = std::move(r.png);
    out.stats = std::move(r.stats);
    return out;
}

std::unique_ptr<VisTool> open_tool(const std::string& spec, const nlohmann::json& options) {
    if (spec.starts_with("builtin:")) return make_builtin_tool(spec, options);
    if (spec.starts_with("http://") || spec.starts_with("https://")) return std::make_unique<HttpTool>(spec);
    throw InvalidConfig("tool must be builtin:<name> or an http(s) endpoint, got " + spec);
}

}  // namespace ava
