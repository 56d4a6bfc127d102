#include "ava/core/agent.hpp"

#include "ava/perception/llm.hpp"
#include "ava/perception/oracle.hpp"
#include "ava/planners/llm_plan.hpp"

namespace ava {

namespace {

std::string default_oracle_mode(PlannerKind kind) {
    switch (kind) {
        case PlannerKind::heuristic_tf: return "volume";
        case PlannerKind::halving_opacity: return "scatter";
        case PlannerKind::llm_centric: return "dr";
    }
    return "volume";
}

}  // namespace

AgentParts make_agent(const AgentConfig& config, std::unique_ptr<ChatBackend> backend) {
    validate(config);
    AgentParts parts;
    if (config.perception_kind == PerceptionKind::oracle) {
        parts.perception = std::make_unique<OraclePerception>(OraclePerception::options_from_json(
            config.perception_params, default_oracle_mode(config.planner_kind)));
    } else {
        parts.backend = backend ? std::move(backend) : std::make_unique<ChatClient>(ChatClientConfig::from_env());
        parts.perception =
            std::make_unique<LlmPerception>(*parts.backend, config.perception_params.value("max_tokens", 1024));
    }
    parts.planner = make_planner(config);
    return parts;
}

}  // namespace ava
