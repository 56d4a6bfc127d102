#include "ava/perception/assessment.hpp"

#include "ava/errors.hpp"

#include <algorithm>
#include <cctype>

namespace ava {

int volume_rank(const Assessment& a) noexcept {
    switch (a.verdict.index()) {
        case 0: return 0;
        case 1: return 1;
        case 2: return 2;
        default: return -1;
    }
}

std::string label_of(const Assessment& a) {
    struct Visitor {
        std::string operator()(const NotRecognizable&) const { return "not recognizable"; }
        std::string operator()(const Recognizable&) const { return "recognizable"; }
        std::string operator()(const Clear&) const { return "clear"; }
        std::string operator()(const Comparison& c) const {
            std::string s = c.winner == Winner::first ? "first wins" : "second wins";
            if (c.too_low) s += ", first too low";
            if (c.second_too_low) s += ", second too low";
            return s;
        }
        std::string operator()(const Answer& ans) const { return ans.text; }
    };
    return std::visit(Visitor{}, a.verdict);
}

namespace {

std::string normalize(const std::string& label) {
    std::string s;
    for (char c : label) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u) || c == ' ') {
            s.push_back(static_cast<char>(std::tolower(u)));
        } else if (c == '-' || c == '_') {
            s.push_back(' ');
        }
    }
    auto first = s.find_first_not_of(' ');
    auto last = s.find_last_not_of(' ');
    return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
}

}  // namespace

Assessment assessment_from_label(const std::string& label) {
    const std::string s = normalize(label);
    if (s.starts_with("not recogni") || s.starts_with("unrecogni") || s == "not visible") {
        return {NotRecognizable{}, std::nullopt};
    }
    if (s.starts_with("recogni")) {
        return {Recognizable{}, std::nullopt};
    }
    if (s == "clear" || s.starts_with("clear ")) {
        return {Clear{}, std::nullopt};
    }
    if (s.starts_with("first wins") || s.starts_with("second wins")) {
        Comparison c;
        c.winner = s.starts_with("first") ? Winner::first : Winner::second;
        c.too_low = s.find("first too low") != std::string::npos;
        c.second_too_low = s.find("second too low") != std::string::npos;
        return {c, std::nullopt};
    }
    return {Answer{label}, std::nullopt};
}

nlohmann::json to_json(const Assessment& a) {
    nlohmann::json j;
    struct Visitor {
        nlohmann::json& j;
        void operator()(const NotRecognizable&) const { j["kind"] = "not_recognizable"; }
        void operator()(const Recognizable&) const { j["kind"] = "recognizable"; }
        void operator()(const Clear&) const { j["kind"] = "clear"; }
        void operator()(const Comparison& c) const {
            j["kind"] = "comparison";
            j["winner"] = c.winner == Winner::first ? "first" : "second";
            j["too_low"] = c.too_low;
            j["second_too_low"] = c.second_too_low;
        }
        void operator()(const Answer& ans) const {
            j["kind"] = "answer";
            j["text"] = ans.text;
        }
    };
    std::visit(Visitor{j}, a.verdict);
    if (a.confidence) {
        j["confidence"] = *a.confidence;
    }
    return j;
}

Assessment assessment_from_json(const nlohmann::json& j) {
    Assessment a;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "not_recognizable") {
        a.verdict = NotRecognizable{};
    } else if (kind == "recognizable") {
        a.verdict = Recognizable{};
    } else if (kind == "clear") {
        a.verdict = Clear{};
    } else if (kind == "comparison") {
        a.verdict = Comparison{j.at("winner").get<std::string>() == "first" ? Winner::first : Winner::second,
                               j.at("too_low").get<bool>(), j.value("second_too_low", false)};
    } else if (kind == "answer") {
        a.verdict = Answer{j.at("text").get<std::string>()};
    } else {
        throw InvalidParams("unknown assessment kind " + kind);
    }
    if (j.contains("confidence")) {
        a.confidence = j["confidence"].get<double>();
    }
    return a;
}

}  // namespace ava
