#pragma once

#include "ava/core/response.hpp"
#include "ava/perception/chat_client.hpp"
#include "ava/perception/perception.hpp"

#include <string>
#include <vector>

namespace ava {

inline constexpr int kMaxImagesPerAssessment = 4;

struct LlmAssessResult {
    ParsedResponse parsed;
    TokenUsage usage;
};

// Sends role prompt + context + 1..4 images to the chat backend and parses the
// tagged reply. Propagates chat errors; throws MissingAssessment for untagged replies.
LlmAssessResult llm_assess(ChatBackend& backend, const std::vector<Bytes>& images, const std::string& role_prompt,
                           const std::string& context, int max_tokens = 1024);

// Perception through a vision LLM. Comparisons send both frames (current first).
class LlmPerception final : public Perception {
public:
    explicit LlmPerception(ChatBackend& backend, int max_tokens = 1024) : backend_(backend), max_tokens_(max_tokens) {}

    Perceived perceive(const PerceptionRequest& request) override;

    // The user-message text for a request (exposed for inspection and tests).
    static std::string compose_context(const PerceptionRequest& request);

private:
    ChatBackend& backend_;
    int max_tokens_;
};

}  // namespace ava
