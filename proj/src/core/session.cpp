#include "ava/core/session.hpp"

#include "ava/errors.hpp"

#include <algorithm>

namespace ava {

bool is_terminal(SessionStatus status) noexcept {
    return status == SessionStatus::done_success || status == SessionStatus::done_budget_exhausted ||
           status == SessionStatus::failed;
}

std::string to_string(SessionStatus status) {
    switch (status) {
        case SessionStatus::running: return "running";
        case SessionStatus::paused: return "paused";
        case SessionStatus::done_success: return "done_success";
        case SessionStatus::done_budget_exhausted: return "done_budget_exhausted";
        case SessionStatus::failed: return "failed";
    }
    return "failed";
}

SessionStatus session_status_from_string(const std::string& text) {
    if (text == "running") return SessionStatus::running;
    if (text == "paused") return SessionStatus::paused;
    if (text == "done_success") return SessionStatus::done_success;
    if (text == "done_budget_exhausted") return SessionStatus::done_budget_exhausted;
    if (text == "failed") return SessionStatus::failed;
    throw InvalidConfig("unknown session status " + text);
}

nlohmann::json to_json(const IterationRecord& r) {
    return nlohmann::json{
        {"step", r.step},
        {"params", to_json(r.params)},
        {"image_ref", r.image_ref},
        {"reasoning", r.reasoning},
        {"plan", r.plan},
        {"assessment", to_json(r.assessment)},
        {"wall_time_ms", r.wall_time_ms},
        {"stats", r.stats},
    };
}

IterationRecord iteration_record_from_json(const nlohmann::json& j) {
    IterationRecord r;
    r.step = j.at("step").get<int>();
    r.params = param_vector_from_json(j.at("params"));
    r.image_ref = j.at("image_ref").get<std::string>();
    r.reasoning = j.value("reasoning", "");
    r.plan = j.value("plan", "");
    r.assessment = assessment_from_json(j.at("assessment"));
    r.wall_time_ms = j.value("wall_time_ms", std::int64_t{0});
    r.stats = j.value("stats", nlohmann::json());
    return r;
}

nlohmann::json to_json(const Session& s) {
    auto records = nlohmann::json::array();
    for (const auto& r : s.records) {
        records.push_back(to_json(r));
    }
    return nlohmann::json{
        {"id", s.id},
        {"goal", s.goal},
        {"config", to_json(s.config)},
        {"records", std::move(records)},
        {"status", to_string(s.status)},
        {"status_reason", s.status_reason},
        {"final_params", s.final_params ? to_json(*s.final_params) : nlohmann::json()},
        {"token_usage",
         {{"prompt_tokens", s.token_usage.prompt_tokens}, {"completion_tokens", s.token_usage.completion_tokens}}},
    };
}

Session session_from_json(const nlohmann::json& j) {
    Session s;
    s.id = j.at("id").get<std::string>();
    s.goal = j.at("goal").get<std::string>();
    s.config = agent_config_from_json(j.at("config"));
    for (const auto& r : j.at("records")) {
        s.records.push_back(iteration_record_from_json(r));
    }
    s.status = session_status_from_string(j.at("status").get<std::string>());
    s.status_reason = j.value("status_reason", "");
    if (j.contains("final_params") && !j["final_params"].is_null()) {
        s.final_params = param_vector_from_json(j["final_params"]);
    }
    if (j.contains("token_usage")) {
        s.token_usage.prompt_tokens = j["token_usage"].value("prompt_tokens", std::int64_t{0});
        s.token_usage.completion_tokens = j["token_usage"].value("completion_tokens", std::int64_t{0});
    }
    return s;
}

std::string serialize_session(const Session& session) {
    return to_json(session).dump(2) + "\n";
}

ContextBundle select_context(const Session& session, int k) {
    ContextBundle bundle;
    const auto& records = session.records;
    if (records.empty() || k <= 0) {
        return bundle;
    }
    const IterationRecord* best = nullptr;
    for (const auto& r : records) {
        const int rank = volume_rank(r.assessment);
        if (rank < 0) continue;
        if (!best || rank > volume_rank(best->assessment)) {
            best = &r;
        }
    }
    const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(k), records.size());
    const std::size_t first_recent = records.size() - count;
    if (best && static_cast<std::size_t>(best - records.data()) < first_recent) {
        bundle.records.push_back(*best);
    }
    for (std::size_t i = first_recent; i < records.size(); ++i) {
        bundle.records.push_back(records[i]);
    }
    if (best) {
        bundle.best_step = best->step;
    }
    return bundle;
}

std::string format_context(const ContextBundle& bundle) {
    if (bundle.records.empty()) {
        return "No previous steps.";
    }
    std::string out = "Previous steps:\n";
    for (const auto& r : bundle.records) {
        out += "- step " + std::to_string(r.step) + ": params " + describe(r.params) + "; assessment: " +
               label_of(r.assessment);
        if (bundle.best_step && *bundle.best_step == r.step) {
            out += " (best so far)";
        }
        if (!r.plan.empty()) {
            out += "; plan: " + r.plan;
        }
        out += "\n";
    }
    return out;
}

}  // namespace ava
