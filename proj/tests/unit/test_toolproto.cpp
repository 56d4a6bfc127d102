#include "ava/bench/phantom.hpp"
#include "ava/errors.hpp"
#include "ava/toolproto/builtin.hpp"
#include "ava/toolproto/http.hpp"

#include "helpers.hpp"

#include <doctest.h>
#include <httplib.h>

#include <random>

using namespace ava;

namespace {

std::unique_ptr<VisTool> small_volume_tool() {
    VolumeTool::Options o;
    o.width = 40;
    o.height = 40;
    return std::make_unique<VolumeTool>(gen_volume_phantom(single_band_phantom(4, 10, {20, 20, 20})), o);
}

std::unique_ptr<VisTool> small_scatter_tool() {
    PointSet ps;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 200; ++i) ps.points.push_back({n(rng), n(rng)});
    return std::make_unique<ScatterTool>(ps);
}

ParamVector random_params(const ParamSpace& space, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ParamVector p;
    for (const auto& e : space.entries()) {
        switch (e.kind) {
            case ParamKind::continuous: p[e.name] = e.lower + u(rng) * (e.upper - e.lower); break;
            case ParamKind::integer: p[e.name] = std::floor(e.lower + u(rng) * (e.upper - e.lower + 1 - 1e-9)); break;
            case ParamKind::categorical: p[e.name] = e.choices[rng() % e.choices.size()]; break;
        }
    }
    return p;
}

nlohmann::json post_render(int port, const std::string& body, int* status) {
    httplib::Client c("127.0.0.1", port);
    auto res = c.Post("/render", body, "application/json");
    REQUIRE(res);
    *status = res->status;
    return nlohmann::json::parse(res->body);
}

}  // namespace

TEST_CASE("loopback renders are byte-identical to direct calls") {
    std::vector<std::unique_ptr<VisTool>> tools;
    tools.push_back(small_volume_tool());
    tools.push_back(small_scatter_tool());
    tools.push_back(std::make_unique<MockDrTool>());
    std::mt19937_64 rng(13);
    for (auto& tool : tools) {
        ToolServer server(*tool);
        HttpTool remote(server.endpoint());
        const auto d = tool->describe();
        CHECK(remote.describe() == d);
        for (int i = 0; i < 8; ++i) {
            const auto p = random_params(d.param_space, rng);
            const auto local = tool->render(p);
            const auto wire = remote.render(p);
            CHECK(wire.png == local.png);
            CHECK(wire.stats == local.stats);
        }
        const auto cr = client_render(server.endpoint(), random_params(d.param_space, rng));
        CHECK(encode_png(cr.image) == cr.png);
    }
}

TEST_CASE("server rejects bad requests with protocol error codes") {
    auto tool = small_scatter_tool();
    ToolServer server(*tool);
    int status = 0;
    auto code = [&](const std::string& body) {
        const auto j = post_render(server.port(), body, &status);
        CHECK(j["ava_proto"] == 1);
        return j["error"]["code"].get<std::string>();
    };
    CHECK(code("{not json") == "malformed_json");
    CHECK(status == 400);
    CHECK(code("[1]") == "malformed_json");
    CHECK(code(R"({"ava_proto": 2, "params": {"opacity": 0.5}})") == "unsupported_version");
    CHECK(code(R"({"ava_proto": 1})") == "missing_params");
    CHECK(code(R"({"ava_proto": 1, "params": {"opacity": "high"}})") == "bad_param_type");
    CHECK(code(R"({"ava_proto": 1, "params": {"opacity": 0.5, "size": 2}})") == "unknown_param");
    CHECK(code(R"({"ava_proto": 1, "params": {"opacity": 3}})") == "param_out_of_bounds");
    CHECK(status == 400);

    const auto ok = post_render(server.port(), R"({"ava_proto": 1, "params": {"opacity": 0.5}})", &status);
    CHECK(status == 200);
    CHECK(decode_png(base64_decode(ok["image"].get<std::string>())).width() == 640);

    HttpTool remote(server.endpoint());
    try {
        remote.render({{"opacity", 2.0}});
        FAIL("expected ProtocolError");
    } catch (const ProtocolError& e) {
        CHECK(e.protocol_code() == "param_out_of_bounds");
    }
}

TEST_CASE("unreachable tools raise ToolUnreachable") {
    HttpTool dead("http://127.0.0.1:1", std::chrono::milliseconds(500));
    CHECK_THROWS_AS(dead.describe(), ToolUnreachable);
    CHECK_THROWS_AS(dead.render({{"opacity", 0.5}}), ToolUnreachable);
    CHECK_THROWS_AS(open_tool("builtin:teapot"), InvalidConfig);
}

TEST_CASE("descriptor JSON round trips") {
    auto tool = small_volume_tool();
    const auto d = tool->describe();
    CHECK(d.metadata.value_range.has_value());
    CHECK(d.metadata.histogram->size() == 32);
    CHECK(tool_descriptor_from_json(to_json(d)) == d);
    CHECK_THROWS(tool_descriptor_from_json(nlohmann::json{{"name", "x"}}));
}

TEST_CASE("volume tool window params") {
    auto tool = small_volume_tool();
    const auto empty = tool->render({{"start", 200.0}, {"end", 100.0}});
    const auto img = decode_png(empty.png);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) CHECK(img.at(x, y) == Rgba{0, 0, 0, 255});
    }
    CHECK(empty.stats.contains("structures"));
    CHECK_THROWS_AS(tool->render({{"start", -5.0}, {"end", 100.0}}), ProtocolError);
}

TEST_CASE("mock dimensionality reduction peaks at its optimum") {
    for (bool five : {false, true}) {
        MockDrTool::Options o;
        o.five_params = five;
        MockDrTool tool(o);
        ParamVector best;
        for (const auto& h : tool.hyperparameters()) best[h.entry.name] = h.optimum;
        best = clamp_to_space(tool.describe().param_space, best).values;
        CHECK(tool.separation(best) == doctest::Approx(o.s_max));
        CHECK(tool.hyperparameters().size() == (five ? 5u : 1u));
        std::mt19937_64 rng(3);
        for (int i = 0; i < 50; ++i) {
            const auto p = random_params(tool.describe().param_space, rng);
            CHECK(tool.separation(p) <= tool.separation(best));
        }
        const auto r = tool.render(best);
        CHECK(r.stats["separation"].get<double>() == doctest::Approx(o.s_max));
        CHECK(r.stats["points"].size() == static_cast<std::size_t>(o.clusters * o.points_per_cluster));
    }
}

TEST_CASE("builtin factory options") {
    testing::TempDir dir;
    save_volume(gen_volume_phantom(single_band_phantom(2, 10, {12, 12, 12})), dir / "ph");
    auto v = make_builtin_tool("builtin:volume", {{"data", dir / "ph.json"}, {"width", 16}, {"height", 16}});
    CHECK(v->describe().param_space.entries().size() == 2);
    auto s = make_builtin_tool("builtin:scatter", {{"points", {{0, 0}, {1, 1}}}});
    CHECK(s->describe().param_space.entries().at(0).name == "opacity");
    CHECK_THROWS_AS(make_builtin_tool("builtin:scatter", nlohmann::json::object()), InvalidConfig);
    CHECK_THROWS_AS(make_builtin_tool("builtin:volume", nlohmann::json::object()), InvalidConfig);
}
