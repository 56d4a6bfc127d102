#include "ava/core/prompt.hpp"

#include "ava/errors.hpp"

#include <charconv>

namespace ava {

namespace {

std::string constraints_clause(const std::vector<std::string>& constraints) {
    if (constraints.empty()) {
        return {};
    }
    std::string out = ", adhering to the following constraints: ";
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (i > 0) out += "; ";
        out += constraints[i];
    }
    return out;
}

std::optional<std::string> lookup(const std::string& name, const AgentConfig& config,
                                  const std::map<std::string, std::string>& fields) {
    if (auto it = fields.find(name); it != fields.end()) {
        return it->second;
    }
    if (name == "visualization task" || name == "task") return config.task;
    if (name == "approach") return config.approach;
    if (name == "scenario") return config.scenario;
    if (name == "constraints") return constraints_clause(config.constraints);
    if (name.starts_with("constraint ")) {
        std::size_t index = 0;
        const auto digits = std::string_view(name).substr(11);
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
        if (ec == std::errc{} && ptr == digits.data() + digits.size() && index >= 1 &&
            index <= config.constraints.size()) {
            return config.constraints[index - 1];
        }
    }
    return std::nullopt;
}

}  // namespace

std::string render_role_prompt(const AgentConfig& config,
                               const std::map<std::string, std::string>& fields) {
    const std::string& tpl = config.goal_template;
    std::string out;
    out.reserve(tpl.size() + 256);
    std::size_t pos = 0;
    while (pos < tpl.size()) {
        const auto open = tpl.find('{', pos);
        if (open == std::string::npos) {
            out.append(tpl, pos);
            break;
        }
        const auto close = tpl.find('}', open + 1);
        if (close == std::string::npos) {
            throw MissingField(tpl.substr(open + 1));
        }
        out.append(tpl, pos, open - pos);
        const std::string name = tpl.substr(open + 1, close - open - 1);
        auto value = lookup(name, config, fields);
        if (!value) {
            throw MissingField(name);
        }
        out += *value;
        pos = close + 1;
    }
    return out;
}

}  // namespace ava
