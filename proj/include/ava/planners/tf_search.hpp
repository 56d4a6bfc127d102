#pragma once

#include "ava/perception/assessment.hpp"
#include "ava/planners/planner.hpp"

#include <utility>

namespace ava {

// Linear sweep of a fixed-width triangular opacity window across the scalar range.
// The window moves one step per "not recognizable", a reduced step per
// "recognizable", and stops on "clear".
struct TfSearchState {
    double min_val = 0.0;
    double max_val = 1.0;
    int bins = 10;
    double window_factor = 1.0;
    double speed_reduction = 0.5;
    double start_point = 0.0;
    double end_point = 0.1;
    bool fine_tuning = false;
    int iterations = 0;

    double window_width() const noexcept { return (max_val - min_val) / bins; }
    double step_size() const noexcept { return window_width() * window_factor; }

    friend bool operator==(const TfSearchState&, const TfSearchState&) = default;
};

// Window starts at min_val. Throws InvalidConfig on a degenerate range or factors.
TfSearchState make_tf_search_state(double min_val, double max_val, int bins = 10,
                                   double window_factor = 1.0, double speed_reduction = 0.5);

std::pair<TfSearchState, PlannerStep> tf_search_step(const TfSearchState& state,
                                                     const Assessment& assessment);

ParamVector tf_window_params(double start, double end);

class HeuristicTfPlanner final : public Planner {
public:
    struct Options {
        int bins = 10;
        double window_factor = 1.0;
        double speed_reduction = 0.5;
    };

    explicit HeuristicTfPlanner(Options options) : options_(options) {}

    ParamVector initial(const ToolDescriptor& tool) override;
    PlannerStep step(const Perceived& perceived, const ParamVector& rendered, const Session& memory) override;

    const TfSearchState& state() const noexcept { return state_; }

private:
    Options options_;
    TfSearchState state_;
};

}  // namespace ava
