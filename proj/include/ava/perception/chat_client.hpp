#pragma once

#include "ava/core/session.hpp"
#include "ava/image.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ava {

struct ChatMessage {
    std::string role;  // "system" | "user" | "assistant"
    std::string text;
    std::vector<Bytes> images;  // PNG payloads, sent inline as data URLs
};

struct ChatRequest {
    std::vector<ChatMessage> messages;
    std::string model;  // empty: the client's configured model
    int max_tokens = 1024;
};

struct ChatAttempt {
    int status = 0;  // HTTP status, 0 for a transport failure
    std::chrono::milliseconds delay_before{0};
};

struct ChatResponse {
    std::string text;
    TokenUsage usage;
    std::vector<ChatAttempt> attempts;
};

struct ChatClientConfig {
    std::string base_url;  // e.g. https://api.openai.com/v1
    std::string api_key;
    std::string model;
    int max_attempts = 4;
    std::chrono::milliseconds base_delay{500};
    std::chrono::milliseconds timeout{60000};
    int max_images = 4;
    int max_in_flight = 4;

    // Reads AVA_LLM_ENDPOINT, AVA_LLM_API_KEY and AVA_LLM_MODEL.
    static ChatClientConfig from_env();
};

// Request body in the OpenAI-compatible chat-completions schema.
nlohmann::json build_chat_body(const ChatRequest& request, const std::string& default_model);

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Client for an OpenAI-compatible chat-completions endpoint with image attachments.
// Retries 429, 5xx and transport failures with exponential backoff. Safe for
// concurrent use; calls beyond max_in_flight wait for a slot.
class ChatClient final : public ChatBackend {
public:
    explicit ChatClient(ChatClientConfig config);
    ~ChatClient();
    ChatClient(const ChatClient&) = delete;
    ChatClient& operator=(const ChatClient&) = delete;

    // Throws AuthError (before any network call when no key is configured),
    // RateLimited once the attempt budget is spent on 429s, ProviderError(status).
    ChatResponse complete(const ChatRequest& request) override;

    const ChatClientConfig& config() const noexcept { return config_; }

private:
    struct Limiter;
    ChatClientConfig config_;
    std::unique_ptr<Limiter> limiter_;
};

}  // namespace ava
