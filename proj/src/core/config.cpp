#include "ava/core/config.hpp"

#include "ava/errors.hpp"
#include "ava/image.hpp"

#include <algorithm>

namespace ava {

const std::vector<std::string>& declared_planner_params(PlannerKind kind) {
    static const std::vector<std::string> tf{"bins", "window_factor", "speed_reduction"};
    static const std::vector<std::string> halving{"param", "initial_opacity", "floor_opacity",
                                                  "quarter_step_on_loss"};
    static const std::vector<std::string> llm{"stop_label", "initial"};
    switch (kind) {
        case PlannerKind::heuristic_tf: return tf;
        case PlannerKind::halving_opacity: return halving;
        case PlannerKind::llm_centric: return llm;
    }
    return tf;
}

void validate(const AgentConfig& config) {
    if (config.max_iterations < 1) {
        throw InvalidConfig("max_iterations must be at least 1");
    }
    for (const auto& c : config.constraints) {
        if (c.empty()) {
            throw InvalidConfig("constraints must be non-empty text");
        }
    }
    if (!(config.stop_threshold >= 0.0)) {
        throw InvalidConfig("stop_threshold must be nonnegative");
    }
    if (config.context_k < 1) {
        throw InvalidConfig("context_k must be positive");
    }
    if (!config.planner_params.is_object()) {
        throw InvalidConfig("planner_params must be an object");
    }
    if (!config.perception_params.is_object()) {
        throw InvalidConfig("perception_params must be an object");
    }
    const auto& declared = declared_planner_params(config.planner_kind);
    for (const auto& [key, _] : config.planner_params.items()) {
        if (std::find(declared.begin(), declared.end(), key) == declared.end()) {
            throw InvalidConfig("planner_params key '" + key + "' is not declared by planner " +
                                to_string(config.planner_kind));
        }
    }
}

std::string to_string(PlannerKind kind) {
    switch (kind) {
        case PlannerKind::heuristic_tf: return "heuristic_tf";
        case PlannerKind::halving_opacity: return "halving_opacity";
        case PlannerKind::llm_centric: return "llm_centric";
    }
    return "heuristic_tf";
}

std::string to_string(PerceptionKind kind) {
    return kind == PerceptionKind::oracle ? "oracle" : "llm";
}

PlannerKind planner_kind_from_string(const std::string& text) {
    if (text == "heuristic_tf") return PlannerKind::heuristic_tf;
    if (text == "halving_opacity") return PlannerKind::halving_opacity;
    if (text == "llm_centric") return PlannerKind::llm_centric;
    throw InvalidConfig("unknown planner_kind " + text);
}

PerceptionKind perception_kind_from_string(const std::string& text) {
    if (text == "oracle") return PerceptionKind::oracle;
    if (text == "llm") return PerceptionKind::llm;
    throw InvalidConfig("unknown perception_kind " + text);
}

nlohmann::json to_json(const AgentConfig& config) {
    return nlohmann::json{
        {"scenario", config.scenario},
        {"task", config.task},
        {"goal_template", config.goal_template},
        {"approach", config.approach},
        {"constraints", config.constraints},
        {"planner_kind", to_string(config.planner_kind)},
        {"perception_kind", to_string(config.perception_kind)},
        {"max_iterations", config.max_iterations},
        {"stop_threshold", config.stop_threshold},
        {"planner_params", config.planner_params},
        {"perception_params", config.perception_params},
        {"context_k", config.context_k},
    };
}

AgentConfig agent_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw InvalidConfig("agent config must be a JSON object");
    }
    AgentConfig c;
    try {
        c.scenario = j.value("scenario", c.scenario);
        c.task = j.value("task", c.task);
        c.goal_template = j.value("goal_template", c.goal_template);
        c.approach = j.value("approach", c.approach);
        c.constraints = j.value("constraints", c.constraints);
        if (j.contains("planner_kind")) {
            c.planner_kind = planner_kind_from_string(j["planner_kind"].get<std::string>());
        }
        if (j.contains("perception_kind")) {
            c.perception_kind = perception_kind_from_string(j["perception_kind"].get<std::string>());
        }
        c.max_iterations = j.value("max_iterations", c.max_iterations);
        c.stop_threshold = j.value("stop_threshold", c.stop_threshold);
        c.planner_params = j.value("planner_params", c.planner_params);
        c.perception_params = j.value("perception_params", c.perception_params);
        c.context_k = j.value("context_k", c.context_k);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("malformed agent config: ") + e.what());
    }
    return c;
}

AgentConfig load_agent_config(const std::string& path) {
    const auto bytes = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes.begin(), bytes.end());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(path + ": " + e.what());
    }
    return agent_config_from_json(j);
}

}  // namespace ava
