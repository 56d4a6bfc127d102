#include "ava/planners/llm_plan.hpp"

#include "ava/errors.hpp"
#include "ava/planners/halving.hpp"
#include "ava/planners/tf_search.hpp"

#include <cctype>

namespace ava {

namespace {

std::string fold(const std::string& s) {
    std::string out;
    for (char c : s) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || c == ' ') out.push_back(static_cast<char>(std::tolower(u)));
    }
    const auto first = out.find_first_not_of(' ');
    const auto last = out.find_last_not_of(' ');
    return first == std::string::npos ? std::string{} : out.substr(first, last - first + 1);
}

}  // namespace

PlannerStep llm_plan_step(const ParsedResponse& parsed, const ParamSpace& space, const LlmPlanContext& ctx) {
    if (fold(parsed.assessment_label) == fold(ctx.stop_label)) {
        return PlannerStep{Done{ctx.last_params}, "stop label '" + ctx.stop_label + "' reached"};
    }
    if (!parsed.proposed_params) {
        return PlannerStep{Failed{"no parameters proposed"}, "model proposed no parameters"};
    }
    auto clamped = clamp_to_space(space, *parsed.proposed_params, ctx.last_params);
    std::string note = "model proposed " + describe(*parsed.proposed_params);
    for (const auto& n : clamped.notes) {
        note += "; " + n;
    }
    return PlannerStep{Next{std::move(clamped.values)}, note};
}

ParamVector LlmCentricPlanner::initial(const ToolDescriptor& tool) {
    space_ = tool.param_space;
    return clamp_to_space(space_, options_.initial).values;
}

PlannerStep LlmCentricPlanner::step(const Perceived& perceived, const ParamVector& rendered, const Session&) {
    return llm_plan_step(perceived.response, space_, LlmPlanContext{rendered, options_.stop_label});
}

std::unique_ptr<Planner> make_planner(const AgentConfig& config) {
    const auto& p = config.planner_params;
    try {
        switch (config.planner_kind) {
            case PlannerKind::heuristic_tf: {
                HeuristicTfPlanner::Options o;
                o.bins = p.value("bins", o.bins);
                o.window_factor = p.value("window_factor", o.window_factor);
                o.speed_reduction = p.value("speed_reduction", o.speed_reduction);
                return std::make_unique<HeuristicTfPlanner>(o);
            }
            case PlannerKind::halving_opacity: {
                HalvingOpacityPlanner::Options o;
                o.param = p.value("param", o.param);
                o.initial_opacity = p.value("initial_opacity", o.initial_opacity);
                o.floor_opacity = p.value("floor_opacity", o.floor_opacity);
                o.quarter_step_on_loss = p.value("quarter_step_on_loss", o.quarter_step_on_loss);
                if (config.stop_threshold > 0.0) {
                    o.threshold = config.stop_threshold;
                }
                return std::make_unique<HalvingOpacityPlanner>(o);
            }
            case PlannerKind::llm_centric: {
                LlmCentricPlanner::Options o;
                o.stop_label = p.value("stop_label", o.stop_label);
                if (p.contains("initial")) {
                    o.initial = param_vector_from_json(p["initial"]);
                }
                return std::make_unique<LlmCentricPlanner>(o);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidConfig(std::string("malformed planner_params: ") + e.what());
    }
    throw InvalidConfig("unknown planner kind");
}

}  // namespace ava
