#include "ava/params.hpp"

#include "ava/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace ava {

ParamSpace::ParamSpace(std::vector<ParamEntry> entries) : entries_(std::move(entries)) {
    std::set<std::string> names;
    for (const auto& e : entries_) {
        if (e.name.empty()) {
            throw InvalidParams("parameter name must not be empty");
        }
        if (!names.insert(e.name).second) {
            throw InvalidParams("duplicate parameter name: " + e.name);
        }
        if (e.kind == ParamKind::categorical) {
            if (e.choices.empty()) {
                throw InvalidParams("categorical parameter " + e.name + " has no choices");
            }
        } else if (!(e.lower <= e.upper) || !std::isfinite(e.lower) || !std::isfinite(e.upper)) {
            throw InvalidParams("parameter " + e.name + " has invalid bounds");
        }
    }
}

const ParamEntry* ParamSpace::find(const std::string& name) const {
    auto it = std::find_if(entries_.begin(), entries_.end(),
                           [&](const ParamEntry& e) { return e.name == name; });
    return it == entries_.end() ? nullptr : &*it;
}

namespace {

ParamValue default_value(const ParamEntry& e) {
    if (e.kind == ParamKind::categorical) {
        return e.choices.front();
    }
    double mid = 0.5 * (e.lower + e.upper);
    if (e.kind == ParamKind::integer) {
        mid = std::floor(mid);
    }
    return mid;
}

std::string format_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

ClampResult clamp_to_space(const ParamSpace& space, const ParamVector& proposal,
                           const ParamVector& fallback) {
    ClampResult out;
    for (const auto& [name, _] : proposal) {
        if (!space.find(name)) {
            out.notes.push_back("dropped unknown parameter " + name);
        }
    }
    for (const auto& e : space.entries()) {
        const ParamValue* src = nullptr;
        if (auto it = proposal.find(e.name); it != proposal.end()) {
            src = &it->second;
        } else if (auto fb = fallback.find(e.name); fb != fallback.end()) {
            src = &fb->second;
        }
        if (!src) {
            out.values[e.name] = default_value(e);
            continue;
        }
        if (e.kind == ParamKind::categorical) {
            const auto* text = std::get_if<std::string>(src);
            if (text && std::find(e.choices.begin(), e.choices.end(), *text) != e.choices.end()) {
                out.values[e.name] = *text;
            } else {
                out.values[e.name] = e.choices.front();
                out.notes.push_back("replaced invalid choice for " + e.name + " with " + e.choices.front());
            }
            continue;
        }
        const auto* number = std::get_if<double>(src);
        if (!number || !std::isfinite(*number)) {
            out.values[e.name] = default_value(e);
            out.notes.push_back("replaced non-numeric " + e.name + " with its midpoint");
            continue;
        }
        double v = *number;
        if (e.kind == ParamKind::integer) {
            v = std::round(v);
        }
        const double clamped = std::clamp(v, e.lower, e.upper);
        if (clamped != v) {
            out.notes.push_back("clamped " + e.name + " from " + format_number(*number) + " to " +
                                format_number(clamped));
        }
        out.values[e.name] = clamped;
    }
    return out;
}

std::optional<ParamViolation> check_params(const ParamSpace& space, const ParamVector& values) {
    for (const auto& [name, _] : values) {
        if (!space.find(name)) {
            return ParamViolation{"unknown_param", "unknown parameter " + name};
        }
    }
    for (const auto& e : space.entries()) {
        auto it = values.find(e.name);
        if (it == values.end()) {
            return ParamViolation{"missing_param", "missing parameter " + e.name};
        }
        if (e.kind == ParamKind::categorical) {
            const auto* text = std::get_if<std::string>(&it->second);
            if (!text) {
                return ParamViolation{"bad_param_type", e.name + " must be a string"};
            }
            if (std::find(e.choices.begin(), e.choices.end(), *text) == e.choices.end()) {
                return ParamViolation{"param_out_of_bounds", e.name + " is not one of the choices"};
            }
            continue;
        }
        const auto* number = std::get_if<double>(&it->second);
        if (!number || !std::isfinite(*number)) {
            return ParamViolation{"bad_param_type", e.name + " must be a finite number"};
        }
        if (e.kind == ParamKind::integer && std::floor(*number) != *number) {
            return ParamViolation{"bad_param_type", e.name + " must be an integer"};
        }
        if (*number < e.lower || *number > e.upper) {
            return ParamViolation{"param_out_of_bounds",
                                  e.name + "=" + format_number(*number) + " outside [" +
                                      format_number(e.lower) + ", " + format_number(e.upper) + "]"};
        }
    }
    return std::nullopt;
}

double number_of(const ParamVector& values, const std::string& name) {
    auto it = values.find(name);
    if (it == values.end()) {
        throw InvalidParams("missing parameter " + name);
    }
    const auto* number = std::get_if<double>(&it->second);
    if (!number) {
        throw InvalidParams("parameter " + name + " is not numeric");
    }
    return *number;
}

std::string to_string(ParamKind kind) {
    switch (kind) {
        case ParamKind::continuous: return "continuous";
        case ParamKind::integer: return "integer";
        case ParamKind::categorical: return "categorical";
    }
    return "continuous";
}

ParamKind param_kind_from_string(const std::string& text) {
    if (text == "continuous") return ParamKind::continuous;
    if (text == "integer") return ParamKind::integer;
    if (text == "categorical") return ParamKind::categorical;
    throw InvalidParams("unknown parameter kind " + text);
}

nlohmann::json to_json(const ParamVector& values) {
    auto j = nlohmann::json::object();
    for (const auto& [name, value] : values) {
        std::visit([&](const auto& v) { j[name] = v; }, value);
    }
    return j;
}

ParamVector param_vector_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw InvalidParams("parameters must be a JSON object");
    }
    ParamVector out;
    for (const auto& [name, value] : j.items()) {
        if (value.is_number()) {
            out[name] = value.get<double>();
        } else if (value.is_string()) {
            out[name] = value.get<std::string>();
        } else {
            throw InvalidParams("parameter " + name + " must be a number or string");
        }
    }
    return out;
}

nlohmann::json to_json(const ParamSpace& space) {
    auto arr = nlohmann::json::array();
    for (const auto& e : space.entries()) {
        nlohmann::json item{{"name", e.name}, {"kind", to_string(e.kind)}};
        if (e.kind == ParamKind::categorical) {
            item["choices"] = e.choices;
        } else {
            item["lower"] = e.lower;
            item["upper"] = e.upper;
        }
        arr.push_back(std::move(item));
    }
    return arr;
}

ParamSpace param_space_from_json(const nlohmann::json& j) {
    if (!j.is_array()) {
        throw InvalidParams("param_space must be an array");
    }
    std::vector<ParamEntry> entries;
    for (const auto& item : j) {
        ParamEntry e;
        e.name = item.at("name").get<std::string>();
        e.kind = param_kind_from_string(item.at("kind").get<std::string>());
        if (e.kind == ParamKind::categorical) {
            e.choices = item.at("choices").get<std::vector<std::string>>();
        } else {
            e.lower = item.at("lower").get<double>();
            e.upper = item.at("upper").get<double>();
        }
        entries.push_back(std::move(e));
    }
    return ParamSpace(std::move(entries));
}

std::string describe(const ParamVector& values) {
    return to_json(values).dump();
}

}  // namespace ava
