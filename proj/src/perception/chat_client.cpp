#include "ava/perception/chat_client.hpp"

#include "ava/errors.hpp"

#include <httplib.h>

#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace ava {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

struct Endpoint {
    std::string origin;  // scheme://host:port
    std::string path;    // prefix, no trailing slash
};

Endpoint split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ProviderError(0, "endpoint URL needs a scheme: " + url);
    }
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint e;
    e.origin = url.substr(0, path_start);
    e.path = path_start == std::string::npos ? std::string{} : url.substr(path_start);
    while (!e.path.empty() && e.path.back() == '/') e.path.pop_back();
    return e;
}

bool retryable(int status) {
    return status == 0 || status == 429 || status >= 500;
}

}  // namespace

ChatClientConfig ChatClientConfig::from_env() {
    ChatClientConfig c;
    c.base_url = env_or("AVA_LLM_ENDPOINT", "https://api.openai.com/v1");
    c.api_key = env_or("AVA_LLM_API_KEY", "");
    c.model = env_or("AVA_LLM_MODEL", "gpt-4o");
    return c;
}

nlohmann::json build_chat_body(const ChatRequest& request, const std::string& default_model) {
    auto messages = nlohmann::json::array();
    for (const auto& m : request.messages) {
        if (m.images.empty()) {
            messages.push_back({{"role", m.role}, {"content", m.text}});
            continue;
        }
        auto content = nlohmann::json::array();
        content.push_back({{"type", "text"}, {"text", m.text}});
        for (const auto& png : m.images) {
            content.push_back({{"type", "image_url"},
                               {"image_url", {{"url", "data:image/png;base64," + base64_encode(png)}}}});
        }
        messages.push_back({{"role", m.role}, {"content", std::move(content)}});
    }
    return nlohmann::json{
        {"model", request.model.empty() ? default_model : request.model},
        {"max_tokens", request.max_tokens},
        {"messages", std::move(messages)},
    };
}

struct ChatClient::Limiter {
    std::mutex mu;
    std::condition_variable cv;
    int available;
    explicit Limiter(int n) : available(n) {}
    void acquire() {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return available > 0; });
        --available;
    }
    void release() {
        {
            std::lock_guard lock(mu);
            ++available;
        }
        cv.notify_one();
    }
};

ChatClient::ChatClient(ChatClientConfig config)
    : config_(std::move(config)), limiter_(std::make_unique<Limiter>(std::max(1, config_.max_in_flight))) {}

ChatClient::~ChatClient() = default;

ChatResponse ChatClient::complete(const ChatRequest& request) {
    if (config_.api_key.empty()) {
        throw AuthError("no API credential configured (set AVA_LLM_API_KEY)");
    }
    if (request.messages.empty()) {
        throw ProviderError(0, "chat request needs at least one message");
    }
    int images = 0;
    for (const auto& m : request.messages) images += static_cast<int>(m.images.size());
    if (images > config_.max_images) {
        throw ProviderError(0, "too many images in one request: " + std::to_string(images));
    }

    const auto endpoint = split_url(config_.base_url);
    const std::string body = build_chat_body(request, config_.model).dump();
    const std::string path = endpoint.path + "/chat/completions";

    limiter_->acquire();
    struct Release {
        Limiter* l;
        ~Release() { l->release(); }
    } release{limiter_.get()};

    httplib::Client client(endpoint.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    client.set_connection_timeout(std::max<time_t>(1, secs.count()));
    client.set_read_timeout(std::max<time_t>(1, secs.count()));
    client.set_bearer_token_auth(config_.api_key);

    ChatResponse out;
    std::chrono::milliseconds delay{0};
    int last_status = 0;
    std::string last_body;
    for (int attempt = 0; attempt < std::max(1, config_.max_attempts); ++attempt) {
        if (attempt > 0) {
            delay = attempt == 1 ? config_.base_delay : delay * 2;
            std::this_thread::sleep_for(delay);
        }
        auto res = client.Post(path, body, "application/json");
        last_status = res ? res->status : 0;
        out.attempts.push_back(ChatAttempt{last_status, attempt == 0 ? std::chrono::milliseconds{0} : delay});
        if (!res) {
            last_body = httplib::to_string(res.error());
            continue;
        }
        last_body = res->body;
        if (res->status == 401 || res->status == 403) {
            throw AuthError("provider rejected the credential (" + std::to_string(res->status) + ")");
        }
        if (retryable(res->status)) {
            continue;
        }
        if (res->status != 200) {
            throw ProviderError(res->status, "provider returned " + std::to_string(res->status) + ": " + res->body);
        }
        try {
            const auto j = nlohmann::json::parse(res->body);
            const auto& content = j.at("choices").at(0).at("message").at("content");
            out.text = content.is_string() ? content.get<std::string>() : content.dump();
            if (j.contains("usage")) {
                out.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
                out.usage.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
            }
        } catch (const nlohmann::json::exception& e) {
            throw ProviderError(res->status, std::string("malformed completion body: ") + e.what());
        }
        return out;
    }
    if (last_status == 429) {
        throw RateLimited("rate limited after " + std::to_string(out.attempts.size()) + " attempts");
    }
    throw ProviderError(last_status, "provider failed after " + std::to_string(out.attempts.size()) +
                                         " attempts: " + last_body);
}

}  // namespace ava
