#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <variant>

namespace ava {

struct NotRecognizable {
    friend bool operator==(const NotRecognizable&, const NotRecognizable&) = default;
};
struct Recognizable {
    friend bool operator==(const Recognizable&, const Recognizable&) = default;
};
struct Clear {
    friend bool operator==(const Clear&, const Clear&) = default;
};

enum class Winner { first, second };

// Pairwise verdict. `too_low` flags the first candidate as below the useful range;
// `second_too_low` does the same for the second.
struct Comparison {
    Winner winner = Winner::first;
    bool too_low = false;
    bool second_too_low = false;
    friend bool operator==(const Comparison&, const Comparison&) = default;
};

struct Answer {
    std::string text;
    friend bool operator==(const Answer&, const Answer&) = default;
};

using Verdict = std::variant<NotRecognizable, Recognizable, Clear, Comparison, Answer>;

struct Assessment {
    Verdict verdict;
    std::optional<double> confidence;

    bool is_volume() const noexcept { return verdict.index() <= 2; }
    friend bool operator==(const Assessment&, const Assessment&) = default;
};

// Rank for volume verdicts: NotRecognizable=0 < Recognizable=1 < Clear=2; -1 otherwise.
int volume_rank(const Assessment& a) noexcept;

// Human-readable label ("not recognizable", "recognizable", "clear", "first wins", ...).
std::string label_of(const Assessment& a);

// Maps a free-text assessment label onto a verdict. Unknown labels become Answer{label}.
Assessment assessment_from_label(const std::string& label);

nlohmann::json to_json(const Assessment& a);
Assessment assessment_from_json(const nlohmann::json& j);

}  // namespace ava
