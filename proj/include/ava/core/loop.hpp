#pragma once

#include "ava/core/config.hpp"
#include "ava/core/control.hpp"
#include "ava/core/session.hpp"
#include "ava/core/store.hpp"
#include "ava/perception/perception.hpp"
#include "ava/planners/planner.hpp"
#include "ava/toolproto/tool.hpp"

#include <functional>
#include <string>

namespace ava {

struct LoopOptions {
    // Derived from config, goal and tool descriptor when empty.
    std::string session_id;
    // Wall-clock timing makes records non-reproducible; oracle runs leave it off.
    bool record_timing = false;
    // Extra perception attempts before a PerceptionError is raised.
    int perception_retries = 0;
    ImageStore* images = nullptr;      // required
    SessionControl* control = nullptr;  // optional operator commands
    std::function<void(const Session&, const IterationRecord&)> on_record;
};

// Runs render -> assess -> plan until the planner is done, fails, or the iteration
// budget runs out. Exactly one IterationRecord is appended per tool render.
// Throws InvalidConfig, ToolUnreachable / ProtocolError from the tool, and
// PerceptionError once the retry budget is spent.
Session run_loop(const AgentConfig& config, const std::string& goal, VisTool& tool, Perception& perception,
                 Planner& planner, const LoopOptions& options);

std::string derive_session_id(const AgentConfig& config, const std::string& goal, const ToolDescriptor& tool);

}  // namespace ava
