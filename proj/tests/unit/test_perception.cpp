#include "ava/errors.hpp"
#include "ava/perception/assessment.hpp"
#include "ava/perception/chat_client.hpp"
#include "ava/perception/llm.hpp"
#include "ava/perception/oracle.hpp"
#include "ava/perception/stats.hpp"

#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <random>
#include <thread>

using namespace ava;

namespace {

StructureStats one(double coverage, double share, double occluder = 0.0) {
    return {{"t", StructureVisibility{coverage, share, occluder, 100}}};
}

int rank_of(const StructureStats& s) { return volume_rank(oracle_assess_volume(s, "t")); }

// Minimal chat-completions endpoint that replays scripted statuses, then succeeds.
class FakeProvider {
public:
    explicit FakeProvider(std::vector<int> statuses, std::string reply = "ASSESSMENT: clear")
        : statuses_(std::move(statuses)), reply_(std::move(reply)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
            last_body = req.body;
            last_auth = req.get_header_value("Authorization");
            const int n = calls++;
            if (n < static_cast<int>(statuses_.size())) {
                res.status = statuses_[n];
                res.set_content("{\"error\":\"scripted\"}", "application/json");
                return;
            }
            nlohmann::json body{{"choices", {{{"message", {{"role", "assistant"}, {"content", reply_}}}}}},
                                {"usage", {{"prompt_tokens", 120}, {"completion_tokens", 7}}}};
            res.set_content(body.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeProvider() {
        server_.stop();
        thread_.join();
    }

    ChatClientConfig config() const {
        ChatClientConfig c;
        c.base_url = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
        c.api_key = "test-key";
        c.model = "vision-model";
        c.base_delay = std::chrono::milliseconds(5);
        c.timeout = std::chrono::milliseconds(5000);
        return c;
    }

    std::atomic<int> calls{0};
    std::string last_body;
    std::string last_auth;

private:
    std::vector<int> statuses_;
    std::string reply_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

class ScriptedBackend final : public ChatBackend {
public:
    explicit ScriptedBackend(std::string reply) : reply_(std::move(reply)) {}
    ChatResponse complete(const ChatRequest& request) override {
        last = request;
        ChatResponse r;
        r.text = reply_;
        r.usage = TokenUsage{10, 2};
        return r;
    }
    ChatRequest last;

private:
    std::string reply_;
};

}  // namespace

TEST_CASE("volume oracle thresholds") {
    CHECK(rank_of(one(0.9, 0.8)) == 2);
    CHECK(rank_of(one(0.9, 0.7)) == 2);
    CHECK(rank_of(one(0.9, 0.5)) == 1);
    CHECK(rank_of(one(0.9, 0.25)) == 1);
    CHECK(rank_of(one(0.9, 0.2)) == 0);
    // Coverage below the floor hides the structure whatever its share.
    CHECK(rank_of(one(0.4, 0.95)) == 0);
    CHECK_THROWS_AS(oracle_assess_volume(one(1, 1), "other"), UnknownStructure);
}

TEST_CASE("volume oracle is monotone in mean share (property)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double cov = u(rng), occ = u(rng);
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        CHECK(rank_of(one(cov, a, occ)) <= rank_of(one(cov, b, occ)));
    }
}

TEST_CASE("scatter oracle prefers less saturation and flags faint candidates") {
    const OverplotMetrics heavy{0.4, 1.0, 0.3}, light{0.05, 0.5, 0.28}, faint{0.0, 0.05, 0.25};
    auto cmp = [](const OverplotMetrics& a, const OverplotMetrics& b) {
        return std::get<Comparison>(oracle_compare_scatter(a, b).verdict);
    };
    CHECK(cmp(light, heavy).winner == Winner::first);
    CHECK(cmp(heavy, light).winner == Winner::second);
    const auto c = cmp(faint, light);
    CHECK(c.winner == Winner::second);
    CHECK(c.too_low);
    CHECK_FALSE(c.second_too_low);
    // Both faint: the more visible wins.
    const OverplotMetrics fainter{0.0, 0.02, 0.25};
    CHECK(cmp(fainter, faint).winner == Winner::second);
    // Identical metrics keep the first.
    CHECK(cmp(light, light).winner == Winner::first);
}

TEST_CASE("assessment labels map both ways") {
    for (const char* label : {"not recognizable", "recognizable", "clear", "first wins", "second wins, first too low"}) {
        CHECK(label_of(assessment_from_label(label)) == label);
    }
    CHECK(std::holds_alternative<NotRecognizable>(assessment_from_label("Not Recognizable.").verdict));
    CHECK(std::holds_alternative<Answer>(assessment_from_label("three clusters").verdict));
    const Assessment a{Comparison{Winner::second, true, true}, 0.8};
    CHECK(assessment_from_json(to_json(a)) == a);
}

TEST_CASE("stats JSON round trips") {
    const StructureStats s{{"a", {0.5, 0.25, 0.125, 42}}, {"b", {1.0, 0.0, 0.0, 0}}};
    CHECK(structure_stats_from_json(to_json(s)) == s);
    const OverplotMetrics m{0.1, 0.2, 0.3};
    CHECK(overplot_metrics_from_json(to_json(m)) == m);
}

TEST_CASE("oracle perception modes read the tool side channel") {
    OraclePerception::Options o;
    o.mode = "volume";
    o.target = "t";
    OraclePerception p(o);
    PerceptionRequest req;
    req.current.stats = {{"structures", to_json(one(0.9, 0.8))}};
    CHECK(p.perceive(req).response.assessment_label == "clear");
    req.current.stats = nullptr;
    CHECK_THROWS_AS(p.perceive(req), PerceptionError);
    CHECK_THROWS_AS(OraclePerception::options_from_json({{"mode", "telepathy"}}, "volume"), InvalidConfig);
}

TEST_CASE("chat client sends the OpenAI-compatible body with inline images") {
    FakeProvider provider({});
    ChatClient client(provider.config());
    ChatRequest req;
    req.messages.push_back({"system", "role", {}});
    req.messages.push_back({"user", "look", {Bytes{1, 2, 3}}});
    const auto r = client.complete(req);
    CHECK(r.text == "ASSESSMENT: clear");
    CHECK(r.usage == TokenUsage{120, 7});
    CHECK(provider.last_auth == "Bearer test-key");
    const auto body = nlohmann::json::parse(provider.last_body);
    CHECK(body["model"] == "vision-model");
    CHECK(body["messages"][0]["content"] == "role");
    CHECK(body["messages"][1]["content"][1]["image_url"]["url"] == "data:image/png;base64,AQID");
}

TEST_CASE("chat client retries 429 and 5xx with doubling delays") {
    FakeProvider provider({429, 503});
    ChatClient client(provider.config());
    ChatRequest req;
    req.messages.push_back({"user", "hi", {}});
    const auto r = client.complete(req);
    REQUIRE(r.attempts.size() == 3);
    CHECK(r.attempts[0].status == 429);
    CHECK(r.attempts[1].status == 503);
    CHECK(r.attempts[2].status == 200);
    CHECK(r.attempts[2].delay_before == 2 * r.attempts[1].delay_before);
}

TEST_CASE("chat client error mapping") {
    ChatRequest req;
    req.messages.push_back({"user", "hi", {}});
    {
        FakeProvider provider({429, 429, 429, 429});
        ChatClient client(provider.config());
        CHECK_THROWS_AS(client.complete(req), RateLimited);
        CHECK(provider.calls == 4);
    }
    {
        FakeProvider provider({401});
        ChatClient client(provider.config());
        CHECK_THROWS_AS(client.complete(req), AuthError);
        CHECK(provider.calls == 1);
    }
    {
        FakeProvider provider({400});
        ChatClient client(provider.config());
        try {
            client.complete(req);
            FAIL("expected ProviderError");
        } catch (const ProviderError& e) {
            CHECK(e.status() == 400);
        }
    }
    {
        FakeProvider provider({});
        auto cfg = provider.config();
        cfg.api_key.clear();
        ChatClient client(cfg);
        CHECK_THROWS_AS(client.complete(req), AuthError);
        CHECK(provider.calls == 0);
    }
}

TEST_CASE("llm perception parses tagged replies and sends both frames for comparisons") {
    ScriptedBackend backend("REASONING: the first is less cluttered\nPLAN: halve again\nASSESSMENT: first wins");
    LlmPerception p(backend);
    PerceptionRequest req;
    req.role_prompt = "role";
    req.goal = "reduce overplotting";
    req.current.params = {{"opacity", 0.5}};
    req.current.png = Bytes{1};
    Observation ref;
    ref.params = {{"opacity", 1.0}};
    ref.png = Bytes{2};
    req.reference = ref;
    const auto out = p.perceive(req);
    CHECK(std::get<Comparison>(out.assessment.verdict).winner == Winner::first);
    CHECK(out.response.plan == "halve again");
    CHECK(out.usage == TokenUsage{10, 2});
    REQUIRE(backend.last.messages.size() == 2);
    CHECK(backend.last.messages[0].text == "role");
    CHECK(backend.last.messages[1].images == std::vector<Bytes>{Bytes{1}, Bytes{2}});

    ScriptedBackend untagged("I think it looks fine");
    LlmPerception q(untagged);
    req.reference.reset();
    CHECK_THROWS_AS(q.perceive(req), MissingAssessment);
    CHECK_THROWS_AS(llm_assess(untagged, {}, "r", "c"), PerceptionError);
    CHECK_THROWS_AS(llm_assess(untagged, std::vector<Bytes>(5, Bytes{1}), "r", "c"), PerceptionError);
}
