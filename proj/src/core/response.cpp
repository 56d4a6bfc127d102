#include "ava/core/response.hpp"

#include "ava/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <regex>
#include <sstream>

namespace ava {

namespace {

enum class Tag { reasoning, plan, assessment, params };

constexpr std::array<std::pair<std::string_view, Tag>, 4> kTags{{
    {"reasoning", Tag::reasoning},
    {"plan", Tag::plan},
    {"assessment", Tag::assessment},
    {"params", Tag::params},
}};

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Returns the tag and the remainder after ':' when `line` opens a section.
std::optional<std::pair<Tag, std::string_view>> match_tag(std::string_view line) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '*' || line[i] == '#')) {
        ++i;
    }
    for (const auto& [name, tag] : kTags) {
        if (line.size() - i < name.size()) continue;
        bool same = true;
        for (std::size_t k = 0; k < name.size(); ++k) {
            if (std::tolower(static_cast<unsigned char>(line[i + k])) != name[k]) {
                same = false;
                break;
            }
        }
        if (!same) continue;
        std::size_t j = i + name.size();
        while (j < line.size() && (line[j] == ' ' || line[j] == '*')) ++j;
        if (j < line.size() && line[j] == ':') {
            ++j;
            while (j < line.size() && line[j] == '*') ++j;
            return std::pair{tag, line.substr(j)};
        }
    }
    return std::nullopt;
}

std::optional<double> parse_number(const std::string& s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<ParamVector> parse_params(const std::string& body) {
    if (body.empty()) return std::nullopt;
    if (body.front() == '{') {
        // Tolerate trailing prose after the object.
        const auto close = body.rfind('}');
        try {
            return param_vector_from_json(nlohmann::json::parse(body.substr(0, close + 1)));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
    static const std::regex pair_re(R"(([A-Za-z_][A-Za-z0-9_]*)\s*[=:]\s*([^,;\n]+))");
    ParamVector out;
    for (auto it = std::sregex_iterator(body.begin(), body.end(), pair_re); it != std::sregex_iterator(); ++it) {
        std::string value = trim((*it)[2].str());
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
            out[(*it)[1].str()] = value.substr(1, value.size() - 2);
        } else if (auto number = parse_number(value)) {
            out[(*it)[1].str()] = *number;
        } else {
            out[(*it)[1].str()] = value;
        }
    }
    if (out.empty()) return std::nullopt;
    return out;
}

}  // namespace

ParsedResponse parse_agent_response(const std::string& text) {
    std::array<std::optional<std::string>, 4> sections;
    std::optional<Tag> current;
    std::string buffer;

    auto flush = [&] {
        if (current) {
            auto& slot = sections[static_cast<std::size_t>(*current)];
            // First occurrence wins; later duplicates are ignored.
            if (!slot) slot = trim(buffer);
        }
        buffer.clear();
    };

    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto m = match_tag(line)) {
            flush();
            current = m->first;
            buffer = std::string(m->second);
        } else if (current) {
            buffer += '\n';
            buffer += line;
        }
    }
    flush();

    const auto& assessment = sections[static_cast<std::size_t>(Tag::assessment)];
    if (!assessment || assessment->empty()) {
        throw MissingAssessment("response has no ASSESSMENT section");
    }
    ParsedResponse out;
    out.reasoning = sections[static_cast<std::size_t>(Tag::reasoning)].value_or("");
    out.plan = sections[static_cast<std::size_t>(Tag::plan)].value_or("");
    out.assessment_label = *assessment;
    if (const auto& params = sections[static_cast<std::size_t>(Tag::params)]) {
        out.proposed_params = parse_params(*params);
    }
    return out;
}

std::string format_response(const ParsedResponse& response) {
    std::string out;
    out += "REASONING: " + response.reasoning + "\n";
    out += "PLAN: " + response.plan + "\n";
    out += "ASSESSMENT: " + response.assessment_label + "\n";
    if (response.proposed_params) {
        out += "PARAMS: " + to_json(*response.proposed_params).dump() + "\n";
    }
    return out;
}

std::string response_format_instruction(bool expect_params) {
    std::string out =
        "Reply using exactly these tagged sections, each starting on its own line: "
        "REASONING: (what you see and why), PLAN: (what you will try next), "
        "ASSESSMENT: (a single label)";
    if (expect_params) {
        out += ", PARAMS: (a JSON object mapping each parameter name to the value to try next)";
    }
    out += ".";
    return out;
}

}  // namespace ava
