#include "ava/planners/tf_search.hpp"

#include "ava/errors.hpp"

#include <cmath>
#include <sstream>

namespace ava {

TfSearchState make_tf_search_state(double min_val, double max_val, int bins, double window_factor,
                                   double speed_reduction) {
    if (!(min_val < max_val)) {
        throw InvalidConfig("tf search needs min_val < max_val");
    }
    if (bins < 1) {
        throw InvalidConfig("bins must be positive");
    }
    if (!(window_factor > 0.0)) {
        throw InvalidConfig("window_factor must be positive");
    }
    if (!(speed_reduction > 0.0 && speed_reduction <= 1.0)) {
        throw InvalidConfig("speed_reduction must lie in (0, 1]");
    }
    TfSearchState s;
    s.min_val = min_val;
    s.max_val = max_val;
    s.bins = bins;
    s.window_factor = window_factor;
    s.speed_reduction = speed_reduction;
    s.start_point = min_val;
    s.end_point = min_val + s.window_width();
    return s;
}

ParamVector tf_window_params(double start, double end) {
    return ParamVector{{"start", start}, {"end", end}};
}

std::pair<TfSearchState, PlannerStep> tf_search_step(const TfSearchState& state,
                                                     const Assessment& assessment) {
    const int rank = volume_rank(assessment);
    if (rank < 0) {
        throw WrongAssessmentKind("tf search expects a volume assessment, got '" + label_of(assessment) + "'");
    }
    TfSearchState next = state;
    if (std::holds_alternative<Clear>(assessment.verdict)) {
        return {next, PlannerStep{Done{tf_window_params(state.start_point, state.end_point)},
                                  "structure is clear; keeping the current window"}};
    }
    double shift = state.step_size();
    if (std::holds_alternative<Recognizable>(assessment.verdict)) {
        shift *= state.speed_reduction;
        next.fine_tuning = true;
    }
    // A window starting at or beyond the top of the range would render nothing.
    if (state.start_point + shift >= state.max_val) {
        return {next, PlannerStep{Failed{"swept range without clear"}, "reached the end of the value range"}};
    }
    next.start_point = state.start_point + shift;
    next.end_point = next.start_point + state.window_width();
    next.iterations = state.iterations + 1;

    std::ostringstream note;
    note << (next.fine_tuning && rank == 1 ? "fine-tuning: " : "") << "shift window by " << shift << " to ["
         << next.start_point << ", " << next.end_point << "]";
    return {next, PlannerStep{Next{tf_window_params(next.start_point, next.end_point)}, note.str()}};
}

ParamVector HeuristicTfPlanner::initial(const ToolDescriptor& tool) {
    double lo = 0.0;
    double hi = 0.0;
    if (tool.metadata.value_range) {
        std::tie(lo, hi) = *tool.metadata.value_range;
    } else if (const auto* start = tool.param_space.find("start")) {
        lo = start->lower;
        hi = start->upper;
    } else {
        throw InvalidConfig("tool " + tool.name + " exposes neither a value range nor a start parameter");
    }
    state_ = make_tf_search_state(lo, hi, options_.bins, options_.window_factor, options_.speed_reduction);
    return tf_window_params(state_.start_point, state_.end_point);
}

PlannerStep HeuristicTfPlanner::step(const Perceived& perceived, const ParamVector&, const Session&) {
    auto [next, step] = tf_search_step(state_, perceived.assessment);
    state_ = next;
    return step;
}

}  // namespace ava
