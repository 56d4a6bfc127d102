#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace ava {

enum class PlannerKind { heuristic_tf, halving_opacity, llm_centric };
enum class PerceptionKind { oracle, llm };

// Role-prompt template used when a config does not provide its own.
inline constexpr std::string_view kDefaultRoleTemplate =
    "You are an autonomous visualization agent tasked with assisting a user in {visualization task}. "
    "In each step, you will receive a screenshot and you will assess the image and provide the "
    "{approach}. Your goal is to determine {goal}. Achieve this goal by {approach}{constraints}.";

struct AgentConfig {
    std::string scenario;
    std::string task;
    std::string goal_template{kDefaultRoleTemplate};
    std::string approach;
    std::vector<std::string> constraints;
    PlannerKind planner_kind = PlannerKind::heuristic_tf;
    PerceptionKind perception_kind = PerceptionKind::oracle;
    int max_iterations = 20;
    double stop_threshold = 0.0;
    nlohmann::json planner_params = nlohmann::json::object();
    // Oracle thresholds, target structure, model settings. Free-form per perception kind.
    nlohmann::json perception_params = nlohmann::json::object();
    // How many recent records are shown to an LLM each step.
    int context_k = 3;

    friend bool operator==(const AgentConfig&, const AgentConfig&) = default;
};

const std::vector<std::string>& declared_planner_params(PlannerKind kind);

// Throws InvalidConfig on the first violated invariant.
void validate(const AgentConfig& config);

std::string to_string(PlannerKind kind);
std::string to_string(PerceptionKind kind);
PlannerKind planner_kind_from_string(const std::string& text);
PerceptionKind perception_kind_from_string(const std::string& text);

nlohmann::json to_json(const AgentConfig& config);
// Missing keys take their defaults; validation is a separate step.
AgentConfig agent_config_from_json(const nlohmann::json& j);
AgentConfig load_agent_config(const std::string& path);

}  // namespace ava
