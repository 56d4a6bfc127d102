#pragma once

#include "ava/core/session.hpp"
#include "ava/params.hpp"
#include "ava/perception/perception.hpp"
#include "ava/toolproto/tool.hpp"

#include <optional>
#include <string>
#include <variant>

namespace ava {

struct Next {
    ParamVector params;
    friend bool operator==(const Next&, const Next&) = default;
};
struct Done {
    ParamVector params;
    friend bool operator==(const Done&, const Done&) = default;
};
struct Failed {
    std::string reason;
    friend bool operator==(const Failed&, const Failed&) = default;
};

struct PlannerStep {
    std::variant<Next, Done, Failed> action;
    std::string note;  // what the planner did, recorded as plan text when perception gives none

    friend bool operator==(const PlannerStep&, const PlannerStep&) = default;
};

// Stateful adapter between the agent loop and one of the planning rules.
class Planner {
public:
    virtual ~Planner() = default;

    virtual ParamVector initial(const ToolDescriptor& tool) = 0;

    // False for steps whose render is only a reference frame (nothing to judge yet).
    virtual bool wants_assessment() const { return true; }

    // Params of a previously rendered frame to judge the current render against.
    virtual std::optional<ParamVector> reference() const { return std::nullopt; }

    // Whether the perception should be asked to propose parameters.
    virtual bool expects_proposals() const { return false; }

    virtual PlannerStep step(const Perceived& perceived, const ParamVector& rendered,
                             const Session& memory) = 0;
};

}  // namespace ava
