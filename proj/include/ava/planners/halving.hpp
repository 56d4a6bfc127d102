#pragma once

#include "ava/perception/assessment.hpp"
#include "ava/planners/planner.hpp"

#include <string>
#include <utility>

namespace ava {

// Bracket [floor, opacity] searched from the top: each step compares the midpoint
// candidate against the current opacity and keeps the half that contains the answer.
struct HalvingState {
    double opacity = 1.0;  // O, current accepted opacity
    double floor = 0.0;    // O_f, lowest allowable opacity
    double threshold = 0.05;
    // When the current opacity beats the candidate without the candidate being too low,
    // raise the floor by a quarter bracket instead of to the candidate.
    bool quarter_step_on_loss = false;

    double width() const noexcept { return opacity - floor; }
    double candidate() const noexcept { return floor + (opacity - floor) / 2.0; }

    friend bool operator==(const HalvingState&, const HalvingState&) = default;
};

HalvingState make_halving_state(double opacity = 1.0, double floor = 0.0, double threshold = 0.05,
                                bool quarter_step_on_loss = false);

// `comparison` judges render(candidate) [first] against render(opacity) [second].
std::pair<HalvingState, PlannerStep> halving_step(const HalvingState& state, const Assessment& comparison,
                                                  const std::string& param = "opacity");

class HalvingOpacityPlanner final : public Planner {
public:
    struct Options {
        std::string param = "opacity";
        double initial_opacity = 1.0;
        double floor_opacity = 0.0;
        double threshold = 0.05;
        bool quarter_step_on_loss = false;
    };

    explicit HalvingOpacityPlanner(Options options) : options_(std::move(options)) {}

    ParamVector initial(const ToolDescriptor& tool) override;
    bool wants_assessment() const override { return !baseline_pending_; }
    std::optional<ParamVector> reference() const override;
    PlannerStep step(const Perceived& perceived, const ParamVector& rendered, const Session& memory) override;

    const HalvingState& state() const noexcept { return state_; }
    int halvings() const noexcept { return halvings_; }

private:
    Options options_;
    HalvingState state_;
    ParamVector base_;  // other tool params, held fixed
    bool baseline_pending_ = true;
    int halvings_ = 0;
};

}  // namespace ava
