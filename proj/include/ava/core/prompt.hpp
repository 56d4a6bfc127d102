#pragma once

#include "ava/core/config.hpp"

#include <map>
#include <string>

namespace ava {

// Fills `config.goal_template`. Placeholders are `{name}`; bindings come from the config
// ("visualization task"/"task", "approach", "scenario", "constraint N", "constraints") and
// then from `fields`, which win on conflict. `{constraints}` expands to the full
// ", adhering to the following constraints: ..." clause, or to nothing when there are none.
// Throws MissingField for any unbound placeholder.
std::string render_role_prompt(const AgentConfig& config,
                               const std::map<std::string, std::string>& fields);

}  // namespace ava
