#include "ava/toolproto/tool.hpp"

#include "ava/errors.hpp"

namespace ava {

void require_conforming(const ParamSpace& space, const ParamVector& params) {
    if (auto violation = check_params(space, params)) {
        throw ProtocolError(violation->code, violation->message);
    }
}

nlohmann::json to_json(const ToolDescriptor& d) {
    nlohmann::json meta = nlohmann::json::object();
    if (d.metadata.value_range) {
        meta["value_range"] = {d.metadata.value_range->first, d.metadata.value_range->second};
    }
    if (d.metadata.histogram) {
        meta["histogram"] = *d.metadata.histogram;
    }
    if (d.metadata.modality) {
        meta["modality"] = *d.metadata.modality;
    }
    return nlohmann::json{
        {"ava_proto", d.protocol_version},
        {"name", d.name},
        {"param_space", to_json(d.param_space)},
        {"metadata", std::move(meta)},
    };
}

ToolDescriptor tool_descriptor_from_json(const nlohmann::json& j) {
    try {
        ToolDescriptor d;
        d.protocol_version = j.at("ava_proto").get<int>();
        if (d.protocol_version != kProtocolVersion) {
            throw ProtocolError("unsupported_version",
                                "unsupported protocol version " + std::to_string(d.protocol_version));
        }
        d.name = j.at("name").get<std::string>();
        d.param_space = param_space_from_json(j.at("param_space"));
        if (d.param_space.empty()) {
            throw ProtocolError("malformed_descriptor", "descriptor has an empty param_space");
        }
        const auto& meta = j.value("metadata", nlohmann::json::object());
        if (meta.contains("value_range")) {
            const auto& vr = meta["value_range"];
            d.metadata.value_range = std::pair{vr.at(0).get<double>(), vr.at(1).get<double>()};
        }
        if (meta.contains("histogram")) {
            d.metadata.histogram = meta["histogram"].get<std::vector<std::uint64_t>>();
        }
        if (meta.contains("modality")) {
            d.metadata.modality = meta["modality"].get<std::string>();
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw ProtocolError("malformed_descriptor", e.what());
    } catch (const InvalidParams& e) {
        throw ProtocolError("malformed_descriptor", e.what());
    }
}

}  // namespace ava
