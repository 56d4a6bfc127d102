#pragma once

#include "ava/core/config.hpp"
#include "ava/core/response.hpp"
#include "ava/planners/planner.hpp"

#include <memory>
#include <string>

namespace ava {

struct LlmPlanContext {
    ParamVector last_params;          // params of the frame just assessed
    std::string stop_label = "clear";  // assessment label that ends the run
};

// Follows the model: stop on the stop label, otherwise take its proposal (clamped
// into the space, clamps noted), otherwise fail.
PlannerStep llm_plan_step(const ParsedResponse& parsed, const ParamSpace& space, const LlmPlanContext& ctx);

class LlmCentricPlanner final : public Planner {
public:
    struct Options {
        std::string stop_label = "clear";
        ParamVector initial;  // missing entries default to the space midpoint
    };

    explicit LlmCentricPlanner(Options options) : options_(std::move(options)) {}

    ParamVector initial(const ToolDescriptor& tool) override;
    bool expects_proposals() const override { return true; }
    PlannerStep step(const Perceived& perceived, const ParamVector& rendered, const Session& memory) override;

private:
    Options options_;
    ParamSpace space_;
};

// Builds the planner named by config.planner_kind from config.planner_params.
std::unique_ptr<Planner> make_planner(const AgentConfig& config);

}  // namespace ava
