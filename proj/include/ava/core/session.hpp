#pragma once

#include "ava/core/config.hpp"
#include "ava/params.hpp"
#include "ava/perception/assessment.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ava {

struct TokenUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;

    TokenUsage& operator+=(const TokenUsage& o) {
        prompt_tokens += o.prompt_tokens;
        completion_tokens += o.completion_tokens;
        return *this;
    }
    friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct IterationRecord {
    int step = 0;
    ParamVector params;
    std::string image_ref;  // content hash of the PNG in the image store
    std::string reasoning;
    std::string plan;
    Assessment assessment;
    std::int64_t wall_time_ms = 0;
    nlohmann::json stats;  // tool side channel, null when absent

    friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

enum class SessionStatus { running, paused, done_success, done_budget_exhausted, failed };

struct Session {
    std::string id;
    std::string goal;
    AgentConfig config;
    std::vector<IterationRecord> records;
    SessionStatus status = SessionStatus::running;
    std::string status_reason;  // set for failed sessions
    std::optional<ParamVector> final_params;
    TokenUsage token_usage;

    friend bool operator==(const Session&, const Session&) = default;
};

bool is_terminal(SessionStatus status) noexcept;
std::string to_string(SessionStatus status);
SessionStatus session_status_from_string(const std::string& text);

nlohmann::json to_json(const IterationRecord& record);
IterationRecord iteration_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Session& session);
Session session_from_json(const nlohmann::json& j);

// Canonical on-disk form: pretty-printed JSON with a trailing newline.
std::string serialize_session(const Session& session);

// The records an agent is shown each step: the last k plus the best-ranked one.
struct ContextBundle {
    std::vector<IterationRecord> records;  // ascending by step, no duplicates
    std::optional<int> best_step;
};

// Best = highest rank under clear > recognizable > not recognizable (ties: lowest step).
ContextBundle select_context(const Session& session, int k);

// Plain-text history block handed to an LLM.
std::string format_context(const ContextBundle& bundle);

}  // namespace ava
