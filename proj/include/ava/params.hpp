#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ava {

enum class ParamKind { continuous, integer, categorical };

struct ParamEntry {
    std::string name;
    ParamKind kind = ParamKind::continuous;
    double lower = 0.0;
    double upper = 0.0;
    std::vector<std::string> choices;  // categorical only

    friend bool operator==(const ParamEntry&, const ParamEntry&) = default;
};

// Numeric values are held as double (integers are whole doubles); categorical values as text.
using ParamValue = std::variant<double, std::string>;

// Ordered so that serialization is deterministic.
using ParamVector = std::map<std::string, ParamValue>;

class ParamSpace {
public:
    ParamSpace() = default;
    explicit ParamSpace(std::vector<ParamEntry> entries);  // validates

    const std::vector<ParamEntry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    const ParamEntry* find(const std::string& name) const;

    friend bool operator==(const ParamSpace&, const ParamSpace&) = default;

private:
    std::vector<ParamEntry> entries_;
};

struct ClampResult {
    ParamVector values;
    std::vector<std::string> notes;  // one line per adjusted or defaulted entry
};

// Projects `proposal` onto the space. Entries the proposal omits are taken from
// `fallback`, then from the space's midpoint / first choice.
ClampResult clamp_to_space(const ParamSpace& space, const ParamVector& proposal,
                           const ParamVector& fallback = {});

// Describes the first violation, or nullopt when `values` conforms exactly.
struct ParamViolation {
    std::string code;  // "unknown_param", "missing_param", "bad_param_type", "param_out_of_bounds"
    std::string message;
};
std::optional<ParamViolation> check_params(const ParamSpace& space, const ParamVector& values);

double number_of(const ParamVector& values, const std::string& name);

std::string to_string(ParamKind kind);
ParamKind param_kind_from_string(const std::string& text);

nlohmann::json to_json(const ParamVector& values);
ParamVector param_vector_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ParamSpace& space);
ParamSpace param_space_from_json(const nlohmann::json& j);

// Compact single-line rendering used in plan text and logs.
std::string describe(const ParamVector& values);

}  // namespace ava
