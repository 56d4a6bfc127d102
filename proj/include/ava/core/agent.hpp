#pragma once

#include "ava/core/config.hpp"
#include "ava/perception/chat_client.hpp"
#include "ava/perception/perception.hpp"
#include "ava/planners/planner.hpp"

#include <memory>

namespace ava {

// Everything one session needs besides the tool. The chat backend is only set for
// LLM perception and is owned here so the perception can hold a reference to it.
struct AgentParts {
    std::unique_ptr<ChatBackend> backend;
    std::unique_ptr<Perception> perception;
    std::unique_ptr<Planner> planner;
};

// Oracle mode defaults to the planner's domain: volume for heuristic_tf, scatter for
// halving_opacity, dr for llm_centric. LLM perception reads its endpoint from the
// environment unless a backend is supplied.
AgentParts make_agent(const AgentConfig& config, std::unique_ptr<ChatBackend> backend = nullptr);

}  // namespace ava
