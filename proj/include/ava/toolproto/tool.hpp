#pragma once

#include "ava/image.hpp"
#include "ava/params.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ava {

inline constexpr int kProtocolVersion = 1;

struct ToolMetadata {
    std::optional<std::pair<double, double>> value_range;
    std::optional<std::vector<std::uint64_t>> histogram;
    std::optional<std::string> modality;

    friend bool operator==(const ToolMetadata&, const ToolMetadata&) = default;
};

struct ToolDescriptor {
    std::string name;
    int protocol_version = kProtocolVersion;
    ParamSpace param_space;
    ToolMetadata metadata;

    friend bool operator==(const ToolDescriptor&, const ToolDescriptor&) = default;
};

struct RenderResult {
    Bytes png;
    nlohmann::json stats;  // null when the tool reports none
};

// A visualization tool the agent can drive: in-process built-ins and remote tools
// behind the wire protocol share this interface.
class VisTool {
public:
    virtual ~VisTool() = default;
    virtual ToolDescriptor describe() = 0;
    // Throws ProtocolError("param_out_of_bounds" | ...) for params outside the space.
    virtual RenderResult render(const ParamVector& params) = 0;
};

// Throws ProtocolError with the violation's code when `params` do not conform.
void require_conforming(const ParamSpace& space, const ParamVector& params);

nlohmann::json to_json(const ToolDescriptor& d);
ToolDescriptor tool_descriptor_from_json(const nlohmann::json& j);

}  // namespace ava
