#include "ava/perception/llm.hpp"

#include "ava/errors.hpp"

namespace ava {

LlmAssessResult llm_assess(ChatBackend& backend, const std::vector<Bytes>& images, const std::string& role_prompt,
                           const std::string& context, int max_tokens) {
    if (images.empty() || images.size() > static_cast<std::size_t>(kMaxImagesPerAssessment)) {
        throw PerceptionError("llm_assess takes 1 to 4 images, got " + std::to_string(images.size()));
    }
    ChatRequest request;
    request.max_tokens = max_tokens;
    request.messages.push_back(ChatMessage{"system", role_prompt, {}});
    request.messages.push_back(ChatMessage{"user", context, images});
    const auto reply = backend.complete(request);
    return LlmAssessResult{parse_agent_response(reply.text), reply.usage};
}

std::string LlmPerception::compose_context(const PerceptionRequest& request) {
    std::string text = "Goal: " + request.goal + "\n";
    text += request.context;
    if (!text.empty() && text.back() != '\n') text += '\n';
    text += "Current parameters: " + describe(request.current.params) + "\n";
    if (request.reference) {
        text += "Image 1 uses the current parameters; image 2 uses " + describe(request.reference->params) +
                ". Assess which is better suited, answering 'first wins' or 'second wins', and add "
                "'first too low' if the first image has too little opacity.\n";
    }
    if (request.want_params && request.space) {
        text += "Adjustable parameters: " + to_json(*request.space).dump() + "\n";
    }
    text += response_format_instruction(request.want_params);
    return text;
}

Perceived LlmPerception::perceive(const PerceptionRequest& request) {
    std::vector<Bytes> images{request.current.png};
    if (request.reference) {
        images.push_back(request.reference->png);
    }
    auto result = llm_assess(backend_, images, request.role_prompt, compose_context(request), max_tokens_);
    Perceived out;
    out.assessment = assessment_from_label(result.parsed.assessment_label);
    out.response = std::move(result.parsed);
    out.usage = result.usage;
    return out;
}

}  // namespace ava
