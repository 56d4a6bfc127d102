#pragma once

#include "ava/core/response.hpp"
#include "ava/core/session.hpp"
#include "ava/image.hpp"
#include "ava/params.hpp"
#include "ava/perception/assessment.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace ava {

// One rendered frame as the perception component sees it.
struct Observation {
    ParamVector params;
    Bytes png;
    std::string image_ref;
    nlohmann::json stats;  // tool side channel (oracle input); null when absent
};

struct PerceptionRequest {
    std::string role_prompt;
    std::string goal;
    const ParamSpace* space = nullptr;
    Observation current;
    // Present for pairwise judgments: `current` is the first candidate, this the second.
    std::optional<Observation> reference;
    std::string context;  // formatted history (see format_context)
    bool want_params = false;  // the planner follows parameters proposed by perception
};

struct Perceived {
    ParsedResponse response;
    Assessment assessment;
    TokenUsage usage;
};

class Perception {
public:
    virtual ~Perception() = default;
    virtual Perceived perceive(const PerceptionRequest& request) = 0;
};

}  // namespace ava
