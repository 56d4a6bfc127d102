#pragma once

#include "ava/params.hpp"

#include <optional>
#include <string>

namespace ava {

struct ParsedResponse {
    std::string reasoning;
    std::string plan;
    std::string assessment_label;  // never empty
    std::optional<ParamVector> proposed_params;

    friend bool operator==(const ParsedResponse&, const ParsedResponse&) = default;
};

// Extracts the REASONING:/PLAN:/ASSESSMENT:/PARAMS: sections of an agent reply.
// Tags are matched case-insensitively at the start of a line, in any order; a section
// runs until the next tag. PARAMS accepts a JSON object or key=value pairs.
// Throws MissingAssessment when no non-empty ASSESSMENT section exists.
ParsedResponse parse_agent_response(const std::string& text);

// Inverse of parse_agent_response for responses the framework itself produces.
std::string format_response(const ParsedResponse& response);

// Formatting instruction appended to LLM prompts so replies stay parseable.
std::string response_format_instruction(bool expect_params);

}  // namespace ava
